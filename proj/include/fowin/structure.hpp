#pragma once

// Vocabularies, finite relational structures over {0..n-1}, word models and
// the built-in arithmetic relations.

#include "fowin/error.hpp"
#include "fowin/sexpr.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fowin {

using Tuple = std::vector<std::size_t>;

struct Symbol {
    std::string name;
    std::size_t arity = 1;
    friend bool operator==(const Symbol&, const Symbol&) = default;
};

class Vocabulary {
  public:
    Vocabulary() = default;
    Vocabulary(std::initializer_list<Symbol> symbols) {
        for (const auto& s : symbols) add(s.name, s.arity);
    }

    void add(std::string name, std::size_t arity) {
        if (arity == 0) throw DomainError("symbol '" + name + "' must have arity >= 1");
        if (find(name)) throw DomainError("duplicate symbol '" + name + "'");
        symbols_.push_back({std::move(name), arity});
    }

    const Symbol* find(std::string_view name) const {
        for (const auto& s : symbols_)
            if (s.name == name) return &s;
        return nullptr;
    }

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

  private:
    std::vector<Symbol> symbols_;
};

/// Characteristic bit vector of an `arity`-ary relation over {0..n-1}, row-major.
class Relation {
  public:
    Relation() = default;
    Relation(std::size_t universe, std::size_t arity) : n_(universe), arity_(arity) {
        std::size_t cells = 1;
        for (std::size_t i = 0; i < arity; ++i) cells *= universe;
        bits_.assign(cells, false);
    }

    std::size_t arity() const { return arity_; }
    std::size_t universe() const { return n_; }

    std::size_t index(std::span<const std::size_t> t) const {
        std::size_t idx = 0;
        for (std::size_t a : t) idx = idx * n_ + a;
        return idx;
    }

    bool contains(std::span<const std::size_t> t) const {
        for (std::size_t a : t)
            if (a >= n_) return false;
        return t.size() == arity_ && bits_[index(t)];
    }

    void insert(std::span<const std::size_t> t) {
        if (t.size() != arity_) throw DomainError("tuple length does not match arity");
        for (std::size_t a : t)
            if (a >= n_) throw DomainError("tuple component out of universe");
        bits_[index(t)] = true;
    }

    bool bit(std::size_t cell) const { return bits_[cell]; }
    std::size_t cells() const { return bits_.size(); }

    Tuple decode(std::size_t cell) const {
        Tuple t(arity_);
        for (std::size_t i = arity_; i-- > 0;) {
            t[i] = cell % n_;
            cell /= n_;
        }
        return t;
    }

    /// Tuples in lexicographic order.
    std::vector<Tuple> tuples() const {
        std::vector<Tuple> out;
        for (std::size_t c = 0; c < bits_.size(); ++c)
            if (bits_[c]) out.push_back(decode(c));
        return out;
    }

    friend bool operator==(const Relation&, const Relation&) = default;

  private:
    std::size_t n_ = 0;
    std::size_t arity_ = 0;
    std::vector<bool> bits_;
};

class Structure {
  public:
    Structure() = default;
    Structure(Vocabulary vocabulary, std::size_t universe) : vocabulary_(std::move(vocabulary)), n_(universe) {
        for (const auto& s : vocabulary_.symbols()) relations_.emplace(s.name, Relation(n_, s.arity));
    }

    const Vocabulary& vocabulary() const { return vocabulary_; }
    std::size_t universe_size() const { return n_; }

    const Relation* find(std::string_view name) const {
        auto it = relations_.find(std::string(name));
        return it == relations_.end() ? nullptr : &it->second;
    }

    const Relation& relation(std::string_view name) const {
        if (auto* r = find(name)) return *r;
        throw DomainError("unknown relation symbol '" + std::string(name) + "'");
    }

    void insert(std::string_view name, std::span<const std::size_t> t) {
        auto it = relations_.find(std::string(name));
        if (it == relations_.end()) throw DomainError("unknown relation symbol '" + std::string(name) + "'");
        it->second.insert(t);
    }
    void insert(std::string_view name, std::initializer_list<std::size_t> t) {
        insert(name, std::span<const std::size_t>(t.begin(), t.size()));
    }

    bool holds(std::string_view name, std::initializer_list<std::size_t> t) const {
        return relation(name).contains(std::span<const std::size_t>(t.begin(), t.size()));
    }

    friend bool operator==(const Structure&, const Structure&) = default;

  private:
    Vocabulary vocabulary_;
    std::size_t n_ = 0;
    std::map<std::string, Relation> relations_;
};

/// Auxiliary (non-uniform) relations indexed by universe size.
struct InterpretationFamily {
    Vocabulary vocabulary;
    std::function<Structure(std::size_t)> at;

    bool empty() const { return !at; }

    static InterpretationFamily none() { return {}; }
    static InterpretationFamily constant(Structure s) {
        Vocabulary v = s.vocabulary();
        return {std::move(v), [s = std::move(s)](std::size_t n) {
                    if (n != s.universe_size())
                        throw DomainError("auxiliary structure has universe " + std::to_string(s.universe_size()) +
                                          ", input has " + std::to_string(n));
                    return s;
                }};
    }
};

inline const Vocabulary& string_vocabulary() {
    static const Vocabulary v{{"<=", 2}, {"S", 1}};
    return v;
}

inline const Vocabulary& arithmetic_vocabulary() {
    static const Vocabulary v{{"+", 3}, {"*", 3}, {"bit", 2}};
    return v;
}

inline bool is_builtin_symbol(std::string_view s) {
    return s == "<=" || s == "=" || s == "+" || s == "*" || s == "bit";
}

/// Builds one built-in relation on {0..n-1}: <=, +, *, bit (bit i of j, LSB = 0).
inline Relation builtin_relation(std::string_view name, std::size_t n) {
    if (name == "<=") {
        Relation r(n, 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) r.insert(Tuple{i, j});
        return r;
    }
    if (name == "+" || name == "*") {
        Relation r(n, 3);
        bool add = name == "+";
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::size_t k = add ? i + j : i * j;
                if (k < n) r.insert(Tuple{i, j, k});
            }
        return r;
    }
    if (name == "bit") {
        Relation r(n, 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i < 64 && ((j >> i) & 1u)) r.insert(Tuple{i, j});
        return r;
    }
    throw DomainError("not a built-in relation: " + std::string(name));
}

inline Structure builtin_arithmetic(std::size_t n) {
    Structure s(arithmetic_vocabulary(), n);
    for (const char* name : {"+", "*", "bit"}) {
        Relation r = builtin_relation(name, n);
        for (const auto& t : r.tuples()) s.insert(name, t);
    }
    return s;
}

/// Word model of `w`: universe {0..|w|-1}, full order, S(x) iff character x (from the left) is '1'.
inline Structure word_model(std::string_view w) {
    Structure s(string_vocabulary(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != '0' && w[i] != '1') throw ParseError("input string must consist of 0/1, got '" + std::string(1, w[i]) + "'");
        for (std::size_t j = i; j < w.size(); ++j) s.insert("<=", {i, j});
        if (w[i] == '1') s.insert("S", {i});
    }
    return s;
}

inline bool is_word_model(const Structure& s) {
    const auto& v = s.vocabulary();
    const Relation* le = s.find("<=");
    const Relation* S = s.find("S");
    return v.size() == 2 && le && S && le->arity() == 2 && S->arity() == 1 &&
           *le == builtin_relation("<=", s.universe_size());
}

/// Binary encoding. Word models encode as their string; other structures as the
/// concatenated row-major characteristic strings of their relations in vocabulary order.
inline std::string encode_structure(const Structure& s) {
    std::string out;
    if (is_word_model(s)) {
        const Relation& S = s.relation("S");
        for (std::size_t i = 0; i < s.universe_size(); ++i) out += S.bit(i) ? '1' : '0';
        return out;
    }
    for (const auto& sym : s.vocabulary().symbols()) {
        const Relation& r = s.relation(sym.name);
        for (std::size_t c = 0; c < r.cells(); ++c) out += r.bit(c) ? '1' : '0';
    }
    return out;
}

/// Union of two structures over the same universe; symbols must not overlap.
inline Structure merge(const Structure& a, const Structure& b) {
    if (a.universe_size() != b.universe_size()) throw DomainError("cannot merge structures with different universes");
    Vocabulary v = a.vocabulary();
    for (const auto& s : b.vocabulary().symbols()) v.add(s.name, s.arity);
    Structure out(v, a.universe_size());
    for (const Structure* src : {&a, &b})
        for (const auto& s : src->vocabulary().symbols())
            for (const auto& t : src->relation(s.name).tuples()) out.insert(s.name, t);
    return out;
}

// Text form:
//   (structure (universe 3) (relation S 1 (0) (2)) (relation <= 2 (0 0) (0 1) ...))

inline std::string write_structure(const Structure& s) {
    std::string out = "(structure (universe " + std::to_string(s.universe_size()) + ")";
    for (const auto& sym : s.vocabulary().symbols()) {
        out += "\n  (relation " + sym.name + " " + std::to_string(sym.arity);
        for (const auto& t : s.relation(sym.name).tuples()) {
            out += " (";
            for (std::size_t i = 0; i < t.size(); ++i) out += (i ? " " : "") + std::to_string(t[i]);
            out += ")";
        }
        out += ")";
    }
    return out + ")\n";
}

inline Structure read_structure(const SExpr& e) {
    if (e.head() != "structure") throw ParseError("expected (structure ...)");
    std::size_t n = 0;
    bool have_n = false;
    Vocabulary v;
    std::vector<const SExpr*> rels;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const SExpr& item = e[i];
        if (item.head() == "universe" && item.size() == 2) {
            n = parse_size(item[1], "universe");
            have_n = true;
        } else if (item.head() == "relation" && item.size() >= 3 && item[1].is_atom()) {
            v.add(item[1].atom, parse_size(item[2], "arity"));
            rels.push_back(&item);
        } else {
            throw ParseError("unexpected structure item: " + to_string(item));
        }
    }
    if (!have_n) throw ParseError("structure lacks (universe n)");
    Structure s(v, n);
    for (const SExpr* r : rels) {
        std::size_t arity = parse_size((*r)[2], "arity");
        for (std::size_t i = 3; i < r->size(); ++i) {
            const SExpr& t = (*r)[i];
            if (!t.is_list() || t.size() != arity) throw ParseError("tuple of wrong arity in relation " + (*r)[1].atom);
            Tuple tup;
            for (const auto& c : t.items) tup.push_back(parse_size(c, "tuple component"));
            try {
                s.insert((*r)[1].atom, tup);
            } catch (const DomainError& err) {
                throw ParseError(std::string(err.what()) + " in relation " + (*r)[1].atom);
            }
        }
    }
    return s;
}

inline Structure read_structure(std::string_view text) { return read_structure(parse_sexpr(text)); }

}  // namespace fowin
