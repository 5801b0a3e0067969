#include "lexer.hpp"

#include <cctype>

namespace delg::detail {

const char* describe(Tok kind)
{
    switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Bang: return "'!'";
    case Tok::Amp: return "'&'";
    case Tok::Bar: return "'|'";
    case Tok::Arrow: return "'->'";
    case Tok::Assign: return "':='";
    case Tok::End: return "end of input";
    }
    return "?";
}

static bool is_ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '@' || c == '.';
}

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.col = col;
        if (is_ident_char(c)) {
            std::size_t j = i;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            tok.kind = Tok::Ident;
            tok.text = std::string(text.substr(i, j - i));
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        std::size_t len = 1;
        switch (c) {
        case '(': tok.kind = Tok::LParen; break;
        case ')': tok.kind = Tok::RParen; break;
        case '[': tok.kind = Tok::LBracket; break;
        case ']': tok.kind = Tok::RBracket; break;
        case '{': tok.kind = Tok::LBrace; break;
        case '}': tok.kind = Tok::RBrace; break;
        case ';': tok.kind = Tok::Semi; break;
        case ',': tok.kind = Tok::Comma; break;
        case '!': tok.kind = Tok::Bang; break;
        case '&': tok.kind = Tok::Amp; break;
        case '|': tok.kind = Tok::Bar; break;
        case '-':
            if (i + 1 < text.size() && text[i + 1] == '>') {
                tok.kind = Tok::Arrow;
                len = 2;
                break;
            }
            throw ParseError(line, col, "unexpected character '-'");
        case ':':
            if (i + 1 < text.size() && text[i + 1] == '=') {
                tok.kind = Tok::Assign;
                len = 2;
                break;
            }
            throw ParseError(line, col, "unexpected character ':'");
        default:
            throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
        tok.text = std::string(text.substr(i, len));
        advance(len);
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

TokenStream::TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens))
{
    if (tokens_.empty() || tokens_.back().kind != Tok::End) tokens_.push_back(Token{});
}

const Token& TokenStream::peek(std::size_t ahead) const
{
    std::size_t k = pos_ + ahead;
    return k < tokens_.size() ? tokens_[k] : tokens_.back();
}

Token TokenStream::next()
{
    Token t = peek();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
}

bool TokenStream::at_ident(std::string_view text) const
{
    return peek().kind == Tok::Ident && peek().text == text;
}

bool TokenStream::accept(Tok kind)
{
    if (!at(kind)) return false;
    next();
    return true;
}

Token TokenStream::expect(Tok kind, std::string_view context)
{
    if (!at(kind)) {
        const Token& t = peek();
        std::string got = t.kind == Tok::Ident ? "'" + t.text + "'" : describe(t.kind);
        fail(std::string("expected ") + describe(kind) + " " + std::string(context) + ", got " + got);
    }
    return next();
}

Token TokenStream::expect_ident(std::string_view context)
{
    return expect(Tok::Ident, context);
}

void TokenStream::expect_keyword(std::string_view keyword)
{
    if (!at_ident(keyword)) fail("expected '" + std::string(keyword) + "'");
    next();
}

void TokenStream::fail(const std::string& message) const
{
    throw ParseError(peek().line, peek().col, message);
}

} // namespace delg::detail
