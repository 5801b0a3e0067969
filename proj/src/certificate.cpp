#include "delg/certificate.hpp"

#include <sstream>

#include "delg/error.hpp"
#include "delg/problem.hpp"

namespace delg {

std::string write_certificate(const Certificate& c)
{
    std::ostringstream out;
    out << "delg-strategy 1\n";
    out << "instance " << hex64(c.instance) << '\n';
    out << "method " << c.method << '\n';
    out << "deadlock " << to_string(c.deadlock) << '\n';
    if (const auto* s = std::get_if<ControllerStrategy>(&c.strategy)) {
        out << "kind " << to_string(s->kind) << '\n';
        out << "index " << (s->index == IndexMode::Round ? "round" : "parity") << '\n';
        for (const auto& [k, a] : s->entries) out << "key " << k << " -> " << a << '\n';
    } else {
        const auto& d = std::get<DistributedStrategy>(c.strategy);
        out << "keying " << to_string(d.keying) << '\n';
        for (const auto& [agent, m] : d.entries())
            for (const auto& [k, a] : m) out << "key " << agent << ' ' << k << " -> " << a << '\n';
    }
    return out.str();
}

Certificate read_certificate(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int n = 0;
    auto next = [&]() -> bool {
        while (std::getline(in, line)) {
            ++n;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line[0] != '#') return true;
        }
        return false;
    };
    auto field = [&](const std::string& name) {
        if (!next() || line.rfind(name + " ", 0) != 0) throw ParseError(n, 1, "expected '" + name + " ...'");
        return line.substr(name.size() + 1);
    };

    if (!next() || line != "delg-strategy 1") throw ParseError(n, 1, "not a strategy certificate");
    Certificate c;
    const std::string hash = field("instance");
    try {
        std::size_t used = 0;
        c.instance = std::stoull(hash, &used, 16);
        if (used != hash.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ParseError(n, 10, "malformed instance hash");
    }
    c.method = field("method");
    try {
        c.deadlock = parse_deadlock(field("deadlock"));
    } catch (const InputError& e) {
        throw ParseError(n, 1, e.what());
    }
    if (!next()) throw ParseError(n, 1, "missing strategy kind");

    auto split_entry = [&](std::string& key, std::string& action) {
        if (line.rfind("key ", 0) != 0) throw ParseError(n, 1, "expected 'key <key> -> <action>'");
        const auto arrow = line.rfind(" -> ");
        if (arrow == std::string::npos || arrow < 4) throw ParseError(n, 1, "missing ' -> '");
        key = line.substr(4, arrow - 4);
        action = line.substr(arrow + 4);
        if (key.empty() || action.empty()) throw ParseError(n, 1, "empty key or action");
    };

    if (line.rfind("kind ", 0) == 0) {
        ControllerStrategy s;
        try {
            s.kind = parse_strategy_kind(line.substr(5));
        } catch (const InputError& e) {
            throw ParseError(n, 6, e.what());
        }
        const std::string index = field("index");
        if (index == "round")
            s.index = IndexMode::Round;
        else if (index == "parity")
            s.index = IndexMode::Parity;
        else
            throw ParseError(n, 7, "index must be round or parity");
        while (next()) {
            std::string key, action;
            split_entry(key, action);
            auto [it, inserted] = s.entries.emplace(key, action);
            if (!inserted && it->second != action)
                throw InputError("line " + std::to_string(n) + ": conflicting entries for key " + key);
        }
        c.strategy = std::move(s);
    } else if (line.rfind("keying ", 0) == 0) {
        DistributedStrategy s;
        try {
            s.keying = parse_strategy_keying(line.substr(7));
        } catch (const InputError& e) {
            throw ParseError(n, 8, e.what());
        }
        while (next()) {
            std::string key, action;
            split_entry(key, action);
            const auto sp = key.find(' ');
            if (sp == std::string::npos) throw ParseError(n, 5, "expected 'key <agent> <key> -> <action>'");
            s.assign(key.substr(0, sp), key.substr(sp + 1), action);
        }
        c.strategy = std::move(s);
    } else {
        throw ParseError(n, 1, "expected 'kind' or 'keying'");
    }
    return c;
}

} // namespace delg
