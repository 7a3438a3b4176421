#pragma once

// Circuit IR (AND/OR/MAJ gates, literals, oracle gates), validation, Boolean
// evaluation, proof-tree counting, tree unfolding and the alternating normal form.

#include "fowin/count.hpp"
#include "fowin/error.hpp"
#include "fowin/sexpr.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fowin {

enum class GateKind { conj, disj, maj, input, neg_input, oracle };

struct Gate {
    GateKind kind = GateKind::conj;
    std::size_t param = 0;  // input index for literals, bit index for oracle gates
    std::vector<std::size_t> children;

    bool is_literal() const { return kind == GateKind::input || kind == GateKind::neg_input; }
    friend bool operator==(const Gate&, const Gate&) = default;
};

struct Circuit {
    std::size_t input_length = 0;
    std::vector<Gate> gates;
    std::vector<std::size_t> roots;  // well-formed circuits have exactly one

    std::size_t add(Gate g) {
        gates.push_back(std::move(g));
        return gates.size() - 1;
    }
    std::size_t add(GateKind kind, std::vector<std::size_t> children = {}, std::size_t param = 0) {
        return add(Gate{kind, param, std::move(children)});
    }
    std::size_t input(std::size_t i) { return add(GateKind::input, {}, i); }
    std::size_t neg_input(std::size_t i) { return add(GateKind::neg_input, {}, i); }
    /// Constant 1 is the empty AND, constant 0 the empty OR.
    std::size_t constant(bool value) { return add(value ? GateKind::conj : GateKind::disj); }

    std::size_t root() const {
        if (roots.size() != 1) throw ConsistencyError("circuit has " + std::to_string(roots.size()) + " roots");
        return roots[0];
    }
    const Gate& operator[](std::size_t id) const { return gates.at(id); }
    std::size_t size() const { return gates.size(); }

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Input length n -> circuit.
struct CircuitFamily {
    std::function<Circuit(std::size_t)> at;
};

/// Oracle function: ordered child values -> count; an oracle gate reads one bit of it.
using Oracle = std::function<Count(const std::string&)>;

inline const char* kind_name(GateKind k) {
    switch (k) {
    case GateKind::conj: return "and";
    case GateKind::disj: return "or";
    case GateKind::maj: return "maj";
    case GateKind::input: return "input";
    case GateKind::neg_input: return "neg_input";
    case GateKind::oracle: return "oracle";
    }
    return "?";
}

struct Diagnostic {
    std::size_t gate;  // offending gate id, or npos for whole-circuit problems
    std::string rule;
    std::string message;
};

inline std::string to_string(const Diagnostic& d) {
    std::string where = d.gate == static_cast<std::size_t>(-1) ? "circuit" : "gate " + std::to_string(d.gate);
    return where + ": [" + d.rule + "] " + d.message;
}

inline std::vector<Diagnostic> validate(const Circuit& c) {
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<Diagnostic> out;
    if (c.roots.size() != 1)
        out.push_back({c.roots.size() > 1 ? c.roots[1] : none, "root",
                       "expected exactly one root, found " + std::to_string(c.roots.size())});
    for (std::size_t r : c.roots)
        if (r >= c.size()) out.push_back({r, "root", "root id out of range"});
    bool dangling = false;
    for (std::size_t id = 0; id < c.size(); ++id) {
        const Gate& g = c.gates[id];
        for (std::size_t ch : g.children)
            if (ch >= c.size()) {
                out.push_back({id, "child", "child id " + std::to_string(ch) + " out of range"});
                dangling = true;
            }
        if (g.is_literal()) {
            if (!g.children.empty()) out.push_back({id, "leaf", "literal gate has children"});
            if (g.param >= c.input_length)
                out.push_back({id, "input", "input index " + std::to_string(g.param) + " >= input length " +
                                                std::to_string(c.input_length)});
        }
    }
    if (dangling) return out;
    // cycle check: iterative DFS with colors
    std::vector<int> color(c.size(), 0);
    for (std::size_t start = 0; start < c.size(); ++start) {
        if (color[start]) continue;
        std::vector<std::pair<std::size_t, std::size_t>> stack{{start, 0}};
        color[start] = 1;
        while (!stack.empty()) {
            auto& [id, next] = stack.back();
            const auto& kids = c.gates[id].children;
            if (next == kids.size()) {
                color[id] = 2;
                stack.pop_back();
                continue;
            }
            std::size_t ch = kids[next++];
            if (color[ch] == 1) {
                out.push_back({ch, "cycle", "gate lies on a cycle"});
                return out;
            }
            if (color[ch] == 0) {
                color[ch] = 1;
                stack.push_back({ch, 0});
            }
        }
    }
    return out;
}

inline void require_valid(const Circuit& c) {
    auto d = validate(c);
    if (!d.empty()) throw ConsistencyError("invalid circuit: " + to_string(d.front()));
}

/// Gates reachable from the root, children before parents.
inline std::vector<std::size_t> topological_order(const Circuit& c) {
    require_valid(c);
    std::vector<std::size_t> order;
    std::vector<bool> seen(c.size(), false);
    std::vector<std::pair<std::size_t, std::size_t>> stack{{c.root(), 0}};
    seen[c.root()] = true;
    while (!stack.empty()) {
        auto& [id, next] = stack.back();
        const auto& kids = c.gates[id].children;
        if (next == kids.size()) {
            order.push_back(id);
            stack.pop_back();
            continue;
        }
        std::size_t ch = kids[next++];
        if (!seen[ch]) {
            seen[ch] = true;
            stack.push_back({ch, 0});
        }
    }
    return order;
}

inline bool has_kind(const Circuit& c, GateKind k) {
    return std::any_of(c.gates.begin(), c.gates.end(), [k](const Gate& g) { return g.kind == k; });
}

namespace detail {

inline void check_input(const Circuit& c, std::string_view x) {
    if (x.size() != c.input_length)
        throw DomainError("input length " + std::to_string(x.size()) + " does not match circuit input length " +
                          std::to_string(c.input_length));
    for (char ch : x)
        if (ch != '0' && ch != '1') throw ParseError("input must be a bit string");
}

inline bool literal_value(const Gate& g, std::string_view x) {
    bool bit = x[g.param] == '1';
    return g.kind == GateKind::input ? bit : !bit;
}

}  // namespace detail

inline bool evaluate_circuit(const Circuit& c, std::string_view x, const Oracle& oracle = nullptr) {
    detail::check_input(c, x);
    if (has_kind(c, GateKind::oracle) && !oracle) throw DomainError("circuit has oracle gates but no oracle was supplied");
    std::vector<char> value(c.size(), 0);
    for (std::size_t id : topological_order(c)) {
        const Gate& g = c.gates[id];
        bool v = false;
        switch (g.kind) {
        case GateKind::input:
        case GateKind::neg_input: v = detail::literal_value(g, x); break;
        case GateKind::conj:
            v = std::all_of(g.children.begin(), g.children.end(), [&](std::size_t ch) { return value[ch]; });
            break;
        case GateKind::disj:
            v = std::any_of(g.children.begin(), g.children.end(), [&](std::size_t ch) { return value[ch]; });
            break;
        case GateKind::maj: {
            std::size_t ones = 0;
            for (std::size_t ch : g.children) ones += value[ch] ? 1 : 0;
            v = 2 * ones >= g.children.size();
            break;
        }
        case GateKind::oracle: {
            std::string y;
            for (std::size_t ch : g.children) y += value[ch] ? '1' : '0';
            v = test_bit(oracle(y), g.param);
            break;
        }
        }
        value[id] = v;
    }
    return value[c.root()];
}

namespace detail {

inline std::vector<Count> arithmetize(const Circuit& c, const std::function<bool(const Gate&)>& leaf) {
    std::vector<Count> value(c.size());
    for (std::size_t id : topological_order(c)) {
        const Gate& g = c.gates[id];
        switch (g.kind) {
        case GateKind::input:
        case GateKind::neg_input: value[id] = leaf(g) ? 1 : 0; break;
        case GateKind::conj: {
            Count acc = 1;
            for (std::size_t ch : g.children) {
                acc *= value[ch];
                if (acc == 0) break;
            }
            value[id] = acc;
            break;
        }
        case GateKind::disj: {
            Count acc = 0;
            for (std::size_t ch : g.children) acc += value[ch];
            value[id] = acc;
            break;
        }
        default: throw DomainError(std::string("proof trees are undefined for ") + kind_name(g.kind) + " gates");
        }
    }
    return value;
}

}  // namespace detail

/// Number of proof trees of the unfolded circuit on x: OR sums, AND multiplies.
inline Count count_proof_trees(const Circuit& c, std::string_view x) {
    detail::check_input(c, x);
    return detail::arithmetize(c, [&](const Gate& g) { return detail::literal_value(g, x); })[c.root()];
}

/// Proof-tree count with every literal set true; bounds count_proof_trees on every input.
inline Count all_true_bound(const Circuit& c) {
    return detail::arithmetize(c, [](const Gate&) { return true; })[c.root()];
}

/// Size of the unfolded tree.
inline Count unfolded_size(const Circuit& c) {
    std::vector<Count> size(c.size());
    for (std::size_t id : topological_order(c)) {
        Count s = 1;
        for (std::size_t ch : c.gates[id].children) s += size[ch];
        size[id] = s;
    }
    return size[c.root()];
}

inline constexpr std::size_t default_unfold_limit = std::size_t{1} << 20;

/// Duplicates shared gates so every gate has one parent. Gates are numbered in preorder, root 0.
inline Circuit unfold_to_tree(const Circuit& c, std::size_t max_gates = default_unfold_limit) {
    Count size = unfolded_size(c);
    if (size > max_gates)
        throw DomainError("unfolded circuit would have " + to_decimal(size) + " gates (limit " +
                          std::to_string(max_gates) + ")");
    Circuit out;
    out.input_length = c.input_length;
    out.gates.reserve(static_cast<std::size_t>(size));
    auto copy = [&](auto&& self, std::size_t id) -> std::size_t {
        const Gate& g = c.gates[id];
        std::size_t me = out.add(Gate{g.kind, g.param, {}});
        std::vector<std::size_t> kids;
        for (std::size_t ch : g.children) kids.push_back(self(self, ch));
        out.gates[me].children = std::move(kids);
        return me;
    };
    out.roots = {copy(copy, c.root())};
    return out;
}

/// True iff every gate reachable from the root has exactly one parent and nothing else exists.
inline bool is_tree(const Circuit& c) {
    if (!validate(c).empty()) return false;
    std::vector<std::size_t> parents(c.size(), 0);
    for (const auto& g : c.gates)
        for (std::size_t ch : g.children) ++parents[ch];
    for (std::size_t id = 0; id < c.size(); ++id)
        if (parents[id] != (id == c.root() ? 0u : 1u)) return false;
    return true;
}

/// Leaves are literals and childless (constant) gates.
inline bool is_leaf(const Gate& g) { return g.children.empty(); }

/// Longest root-to-leaf path length.
inline std::size_t depth(const Circuit& c) {
    std::vector<std::size_t> h(c.size(), 0);
    for (std::size_t id : topological_order(c))
        for (std::size_t ch : c.gates[id].children) h[id] = std::max(h[id], h[ch] + 1);
    return h[c.root()];
}

/// Tree, AND root, every leaf at the same even depth, AND on even and OR on odd layers.
inline bool is_alternating_normal(const Circuit& c) {
    if (!is_tree(c) || has_kind(c, GateKind::maj) || has_kind(c, GateKind::oracle)) return false;
    std::optional<std::size_t> leaf_depth;
    bool ok = true;
    auto walk = [&](auto&& self, std::size_t id, std::size_t d) -> void {
        const Gate& g = c.gates[id];
        if (is_leaf(g)) {
            if (!leaf_depth) leaf_depth = d;
            ok = ok && *leaf_depth == d && d % 2 == 0 && d > 0;
            return;
        }
        ok = ok && g.kind == (d % 2 == 0 ? GateKind::conj : GateKind::disj);
        for (std::size_t ch : g.children) self(self, ch, d + 1);
    };
    walk(walk, c.root(), 0);
    return ok;
}

/// Alternating normal form: unfold, level with unary ANDs, then split each gate
/// into an AND/OR layer pair, so depth doubles. Counts and values are preserved.
inline Circuit normalize_alternating(const Circuit& c, std::size_t max_gates = default_unfold_limit) {
    if (has_kind(c, GateKind::maj) || has_kind(c, GateKind::oracle))
        throw DomainError("normalize_alternating needs an AND/OR circuit");
    Circuit tree = unfold_to_tree(c, max_gates);
    if (is_leaf(tree[tree.root()])) {
        std::size_t r = tree.add(GateKind::conj, {tree.root()});
        tree.roots = {r};
    }
    std::size_t levels = depth(tree);

    // Leveled copy: every leaf at depth `levels`.
    Circuit leveled;
    leveled.input_length = tree.input_length;
    auto level = [&](auto&& self, std::size_t id, std::size_t height) -> std::size_t {
        const Gate& g = tree[id];
        if (is_leaf(g)) {
            std::size_t cur = leveled.add(g);
            for (std::size_t i = 0; i < height; ++i) cur = leveled.add(GateKind::conj, {cur});
            return cur;
        }
        std::vector<std::size_t> kids;
        for (std::size_t ch : g.children) kids.push_back(self(self, ch, height - 1));
        return leveled.add(Gate{g.kind, g.param, std::move(kids)});
    };
    leveled.roots = {level(level, tree.root(), levels)};

    Circuit out;
    out.input_length = leveled.input_length;
    auto split = [&](auto&& self, std::size_t id) -> std::size_t {
        const Gate& g = leveled[id];
        if (is_leaf(g)) return out.add(g);
        std::vector<std::size_t> tops;
        for (std::size_t ch : g.children) tops.push_back(self(self, ch));
        if (g.kind == GateKind::conj) {
            for (auto& t : tops) t = out.add(GateKind::disj, {t});
            return out.add(GateKind::conj, std::move(tops));
        }
        std::size_t o = out.add(GateKind::disj, std::move(tops));
        return out.add(GateKind::conj, {o});
    };
    out.roots = {split(split, leveled.root())};
    return out;
}

// Text format:
//   (circuit (input_length 3) (flavor circ) (gate 0 or 1 2) (gate 1 input 0) (gate 2 neg_input 1) (root 0))
// Oracle gates: (gate id oracle <bit> <children in order>).

inline std::string flavor_of(const Circuit& c) {
    if (has_kind(c, GateKind::oracle)) return "o-circ";
    if (has_kind(c, GateKind::maj)) return "maj-circ";
    return "circ";
}

inline std::string write_circuit(const Circuit& c) {
    std::string out = "(circuit (input_length " + std::to_string(c.input_length) + ") (flavor " + flavor_of(c) + ")";
    for (std::size_t id = 0; id < c.size(); ++id) {
        const Gate& g = c.gates[id];
        out += "\n  (gate " + std::to_string(id) + " " + kind_name(g.kind);
        if (g.is_literal() || g.kind == GateKind::oracle) out += " " + std::to_string(g.param);
        for (std::size_t ch : g.children) out += " " + std::to_string(ch);
        out += ")";
    }
    for (std::size_t r : c.roots) out += "\n  (root " + std::to_string(r) + ")";
    return out + ")\n";
}

inline Circuit read_circuit(const SExpr& e) {
    if (e.head() != "circuit") throw ParseError("expected (circuit ...)");
    Circuit c;
    std::optional<std::string> flavor;
    bool have_length = false;
    std::map<std::size_t, std::size_t> index_of;  // file id -> position
    std::vector<std::pair<std::size_t, const SExpr*>> records;
    std::vector<std::size_t> root_ids;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const SExpr& item = e[i];
        std::string_view h = item.head();
        if (h == "input_length" && item.size() == 2) {
            c.input_length = parse_size(item[1], "input_length");
            have_length = true;
        } else if (h == "flavor" && item.size() == 2 && item[1].is_atom()) {
            flavor = item[1].atom;
            if (*flavor != "circ" && *flavor != "maj-circ" && *flavor != "o-circ")
                throw ParseError("unknown circuit flavor " + *flavor);
        } else if (h == "gate" && item.size() >= 3) {
            std::size_t id = parse_size(item[1], "gate id");
            if (index_of.count(id)) throw ParseError("duplicate gate id " + std::to_string(id));
            records.push_back({id, &item});
            index_of[id] = 0;
        } else if (h == "root" && item.size() == 2) {
            root_ids.push_back(parse_size(item[1], "root"));
        } else {
            throw ParseError("unexpected circuit item: " + to_string(item));
        }
    }
    if (!have_length) throw ParseError("circuit lacks (input_length n)");
    std::size_t pos = 0;
    for (auto& [id, idx] : index_of) idx = pos++;
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    auto resolve = [&](std::size_t id) {
        auto it = index_of.find(id);
        if (it == index_of.end()) throw ParseError("reference to undefined gate " + std::to_string(id));
        return it->second;
    };
    for (const auto& [id, rec] : records) {
        const SExpr& item = *rec;
        if (!item[2].is_atom()) throw ParseError("gate kind must be a word");
        const std::string& k = item[2].atom;
        Gate g;
        std::size_t first_child = 3;
        if (k == "and") g.kind = GateKind::conj;
        else if (k == "or") g.kind = GateKind::disj;
        else if (k == "maj") g.kind = GateKind::maj;
        else if (k == "input" || k == "neg_input" || k == "oracle") {
            g.kind = k == "input" ? GateKind::input : k == "neg_input" ? GateKind::neg_input : GateKind::oracle;
            if (item.size() < 4) throw ParseError(k + " gate needs a parameter");
            g.param = parse_size(item[3], k + " parameter");
            first_child = 4;
        } else {
            throw ParseError("unknown gate kind " + k);
        }
        for (std::size_t j = first_child; j < item.size(); ++j) g.children.push_back(resolve(parse_size(item[j], "child")));
        c.gates.push_back(std::move(g));
    }
    for (std::size_t r : root_ids) c.roots.push_back(resolve(r));
    if (flavor && *flavor != flavor_of(c)) {
        bool maj = has_kind(c, GateKind::maj), orc = has_kind(c, GateKind::oracle);
        if ((*flavor == "circ" && (maj || orc)) || (*flavor == "maj-circ" && orc))
            throw ParseError("gates not allowed in flavor " + *flavor);
    }
    return c;
}

inline Circuit read_circuit(std::string_view text) { return read_circuit(parse_sexpr(text)); }

}  // namespace fowin
