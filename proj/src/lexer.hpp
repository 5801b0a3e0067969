#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "delg/error.hpp"

namespace delg::detail {

enum class Tok {
    Ident,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Semi,
    Comma,
    Bang,
    Amp,
    Bar,
    Arrow,
    Assign,
    End
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int col = 1;
};

const char* describe(Tok kind);

// Identifiers are runs of [A-Za-z0-9_@.]; '#' starts a comment running to end of line.
std::vector<Token> tokenize(std::string_view text);

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> tokens);

    const Token& peek(std::size_t ahead = 0) const;
    Token next();
    bool at(Tok kind) const { return peek().kind == kind; }
    bool at_ident(std::string_view text) const;
    bool accept(Tok kind);
    Token expect(Tok kind, std::string_view context);
    Token expect_ident(std::string_view context);
    void expect_keyword(std::string_view keyword);
    [[noreturn]] void fail(const std::string& message) const;

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

} // namespace delg::detail
