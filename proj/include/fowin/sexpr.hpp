#pragma once

// Minimal s-expression reader/writer shared by every text format in the library.

#include "fowin/error.hpp"

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fowin {

struct SExpr {
    std::string atom;          // set iff is_atom()
    std::vector<SExpr> items;  // list elements
    bool list = false;

    static SExpr make_atom(std::string a) { return SExpr{std::move(a), {}, false}; }
    static SExpr make_list(std::vector<SExpr> xs) { return SExpr{{}, std::move(xs), true}; }

    bool is_atom() const { return !list; }
    bool is_list() const { return list; }
    std::size_t size() const { return items.size(); }
    const SExpr& operator[](std::size_t i) const { return items.at(i); }

    /// Head symbol of a list, or "" when the list is empty or starts with a list.
    std::string_view head() const {
        if (!list || items.empty() || !items[0].is_atom()) return {};
        return items[0].atom;
    }
};

namespace detail {

class SExprReader {
  public:
    explicit SExprReader(std::string_view text) : text_(text) {}

    std::vector<SExpr> read_all() {
        std::vector<SExpr> out;
        skip_space();
        while (pos_ < text_.size()) {
            out.push_back(read_one());
            skip_space();
        }
        return out;
    }

  private:
    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    SExpr read_one() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input");
        char c = text_[pos_];
        if (c == ')') throw ParseError("unexpected ')' at offset " + std::to_string(pos_));
        if (c == '(') {
            ++pos_;
            std::vector<SExpr> items;
            for (;;) {
                skip_space();
                if (pos_ >= text_.size()) throw ParseError("unbalanced '(': missing ')'");
                if (text_[pos_] == ')') {
                    ++pos_;
                    return SExpr::make_list(std::move(items));
                }
                items.push_back(read_one());
            }
        }
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
            ++pos_;
        }
        return SExpr::make_atom(std::string(text_.substr(start, pos_ - start)));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<SExpr> parse_sexprs(std::string_view text) {
    return detail::SExprReader(text).read_all();
}

inline SExpr parse_sexpr(std::string_view text) {
    auto all = parse_sexprs(text);
    if (all.size() != 1) throw ParseError("expected exactly one expression, found " + std::to_string(all.size()));
    return std::move(all.front());
}

inline std::string to_string(const SExpr& e) {
    if (e.is_atom()) return e.atom;
    std::string s = "(";
    for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) s += ' ';
        s += to_string(e.items[i]);
    }
    return s + ")";
}

inline std::size_t parse_size(const SExpr& e, std::string_view what) {
    if (!e.is_atom() || e.atom.empty()) throw ParseError(std::string(what) + ": expected a number");
    std::size_t v = 0;
    for (char c : e.atom) {
        if (c < '0' || c > '9') throw ParseError(std::string(what) + ": not a number: " + e.atom);
        v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
}

}  // namespace fowin
