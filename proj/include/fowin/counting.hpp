#pragma once

// Winning-strategy counting for prenex sentences.
//
// count_win evaluates the alternating sum/product over the prefix. It walks the
// prefix left to right, partially evaluating the matrix after each assignment
// and memoizing on the simplified residual, which is bit-exact with the plain
// nested loop (count_win_nested) but avoids re-exploring identical subgames.
// count_win_gametree and count_skolem are independent brute-force oracles.

#include "fowin/count.hpp"
#include "fowin/eval.hpp"
#include "fowin/formula.hpp"
#include "fowin/structure.hpp"

#include <bitset>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace fowin {

struct Guards {
    std::size_t gametree_max_n = 4;
    std::size_t gametree_max_prefix = 4;
    /// Strategy spaces up to this size are enumerated one strategy at a time.
    std::size_t gametree_enumeration_limit = std::size_t{1} << 20;
    std::size_t skolem_max_n = 3;
    std::size_t skolem_max_k = 2;
};

namespace detail {

inline std::optional<Structure> aux_at(const InterpretationFamily& aux, std::size_t n) {
    if (aux.empty()) return std::nullopt;
    return aux.at(n);
}

/// Hash-consed residual formulas over prefix slots.
class ResidualEngine {
  public:
    static constexpr std::size_t kMaxVars = 1024;
    using VarSet = std::bitset<kMaxVars>;

    ResidualEngine(const Prenex& p, const Model& model) : prefix_(p.prefix), n_(model.size()) {
        if (p.prefix.size() > kMaxVars) throw DomainError("prefix longer than " + std::to_string(kMaxVars) + " variables");
        for (std::size_t i = 0; i < p.prefix.size(); ++i) slot_of_[p.prefix[i].var] = static_cast<int>(i);
        true_ = intern(Node{Kind::t});
        false_ = intern(Node{Kind::f});
        root_ = build(p.matrix, model);
        // count of the suffix game from position i with a true matrix
        true_count_.assign(prefix_.size() + 1, Count(1));
        for (std::size_t i = prefix_.size(); i-- > 0;)
            true_count_[i] = prefix_[i].universal ? pow(true_count_[i + 1], n_) : true_count_[i + 1] * n_;
    }

    Count count() { return count_from(0, root_); }

  private:
    enum class Kind : unsigned char { t, f, atom, eq, neg, conj, disj };

    struct Node {
        Kind kind;
        const Relation* rel = nullptr;
        std::vector<long> args;  // >= 0 constant element, < 0 slot -(s+1)
        std::vector<int> kids;
        VarSet vars;
    };

    static long slot_arg(int s) { return -static_cast<long>(s) - 1; }
    static int arg_slot(long a) { return static_cast<int>(-a - 1); }

    std::string key_of(const Node& nd) const {
        std::string k;
        k.reserve(8 + nd.args.size() * 4 + nd.kids.size() * 4);
        k += static_cast<char>(nd.kind);
        auto put = [&k](long v) {
            k.append(reinterpret_cast<const char*>(&v), sizeof v);
        };
        put(reinterpret_cast<long>(nd.rel));
        for (long a : nd.args) put(a);
        k += '|';
        for (int c : nd.kids) put(c);
        return k;
    }

    int intern(Node nd) {
        std::string k = key_of(nd);
        auto it = ids_.find(k);
        if (it != ids_.end()) return it->second;
        if (nd.kind == Kind::atom || nd.kind == Kind::eq) {
            for (long a : nd.args)
                if (a < 0) nd.vars.set(static_cast<std::size_t>(arg_slot(a)));
        } else {
            for (int c : nd.kids) nd.vars |= nodes_[static_cast<std::size_t>(c)].vars;
        }
        nodes_.push_back(std::move(nd));
        int id = static_cast<int>(nodes_.size() - 1);
        ids_.emplace(std::move(k), id);
        return id;
    }

    const std::vector<Tuple>& tuples_of(const Relation* r) {
        auto it = tuples_.find(r);
        if (it == tuples_.end()) it = tuples_.emplace(r, r->tuples()).first;
        return it->second;
    }

    int make_atom(const Relation* rel, std::vector<long> args) {
        if (!rel) {  // equality
            long a = args[0], b = args[1];
            if (a >= 0 && b >= 0) return a == b ? true_ : false_;
            if (a == b) return true_;
            if (a > b) std::swap(a, b);
            return intern(Node{Kind::eq, nullptr, {a, b}, {}, {}});
        }
        bool ground = true;
        for (long a : args) ground = ground && a >= 0;
        if (ground) {
            std::size_t idx = 0;
            for (long a : args) idx = idx * n_ + static_cast<std::size_t>(a);
            return rel->bit(idx) ? true_ : false_;
        }
        // Prune atoms no tuple can complete.
        bool any = false;
        for (const auto& t : tuples_of(rel)) {
            bool match = true;
            for (std::size_t i = 0; i < args.size() && match; ++i) {
                if (args[i] >= 0) {
                    match = t[i] == static_cast<std::size_t>(args[i]);
                } else {
                    for (std::size_t j = 0; j < i && match; ++j)
                        if (args[j] == args[i]) match = t[j] == t[i];
                }
            }
            if (match) {
                any = true;
                break;
            }
        }
        if (!any) return false_;
        return intern(Node{Kind::atom, rel, std::move(args), {}, {}});
    }

    int make_neg(int k) {
        if (k == true_) return false_;
        if (k == false_) return true_;
        const Node& nd = nodes_[static_cast<std::size_t>(k)];
        if (nd.kind == Kind::neg) return nd.kids[0];
        return intern(Node{Kind::neg, nullptr, {}, {k}, {}});
    }

    int make_junction(Kind kind, const std::vector<int>& in) {
        bool conj = kind == Kind::conj;
        int absorbing = conj ? false_ : true_;
        int neutral = conj ? true_ : false_;
        std::vector<int> kids;
        for (int k : in) {
            if (k == absorbing) return absorbing;
            if (k == neutral) continue;
            const Node& nd = nodes_[static_cast<std::size_t>(k)];
            if (nd.kind == kind)
                kids.insert(kids.end(), nd.kids.begin(), nd.kids.end());
            else
                kids.push_back(k);
        }
        std::sort(kids.begin(), kids.end());
        kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
        if (kids.empty()) return neutral;
        if (kids.size() == 1) return kids[0];
        return intern(Node{kind, nullptr, {}, std::move(kids), {}});
    }

    int build(const Formula& phi, const Model& model) {
        switch (phi->op) {
        case Op::truth: return true_;
        case Op::falsity: return false_;
        case Op::atom: {
            std::vector<long> args;
            for (const auto& t : phi->args) {
                if (t.kind == Term::Kind::min || t.kind == Term::Kind::max) {
                    if (n_ == 0) throw DomainError("(min)/(max) used over an empty universe");
                    args.push_back(t.kind == Term::Kind::min ? 0 : static_cast<long>(n_ - 1));
                    continue;
                }
                auto it = slot_of_.find(t.name);
                if (it == slot_of_.end()) throw DomainError("unbound variable '" + t.name + "'");
                args.push_back(slot_arg(it->second));
            }
            if (phi->symbol == "=") {
                if (args.size() != 2) throw DomainError("arity mismatch for '=': expected 2");
                return make_atom(nullptr, std::move(args));
            }
            const Relation& rel = model.relation(phi->symbol, args.size());
            return make_atom(&rel, std::move(args));
        }
        case Op::negation: return make_neg(build(phi->kids[0], model));
        case Op::conjunction:
        case Op::disjunction: {
            std::vector<int> kids;
            for (const auto& k : phi->kids) kids.push_back(build(k, model));
            return make_junction(phi->op == Op::conjunction ? Kind::conj : Kind::disj, kids);
        }
        default: throw DomainError("matrix must be quantifier-free and #-free");
        }
    }

    int subst(int id, int slot, long value, std::unordered_map<int, int>& memo) {
        const Node& nd0 = nodes_[static_cast<std::size_t>(id)];
        if (!nd0.vars.test(static_cast<std::size_t>(slot))) return id;
        if (auto it = memo.find(id); it != memo.end()) return it->second;
        int out;
        Kind kind = nd0.kind;
        if (kind == Kind::atom || kind == Kind::eq) {
            std::vector<long> args = nd0.args;
            const Relation* rel = nd0.rel;
            for (long& a : args)
                if (a == slot_arg(slot)) a = value;
            out = make_atom(rel, std::move(args));
        } else if (kind == Kind::neg) {
            int k = nd0.kids[0];
            out = make_neg(subst(k, slot, value, memo));
        } else {
            std::vector<int> kids = nd0.kids;
            for (int& k : kids) k = subst(k, slot, value, memo);
            out = make_junction(kind, kids);
        }
        memo.emplace(id, out);
        return out;
    }

    Count count_from(std::size_t pos, int id) {
        if (id == true_) return true_count_[pos];
        if (id == false_) return 0;
        std::uint64_t key = (static_cast<std::uint64_t>(pos) << 40) | static_cast<std::uint64_t>(id);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool universal = prefix_[pos].universal;
        Count result;
        if (!nodes_[static_cast<std::size_t>(id)].vars.test(pos)) {
            Count inner = count_from(pos + 1, id);
            result = universal ? pow(inner, n_) : inner * n_;
        } else {
            result = universal ? 1 : 0;
            for (std::size_t v = 0; v < n_; ++v) {
                std::unordered_map<int, int> sub_memo;
                int next = subst(id, static_cast<int>(pos), static_cast<long>(v), sub_memo);
                Count c = count_from(pos + 1, next);
                if (universal) {
                    result *= c;
                    if (result == 0) break;
                } else {
                    result += c;
                }
            }
        }
        memo_.emplace(key, result);
        return result;
    }

    std::vector<Quantifier> prefix_;
    std::size_t n_;
    std::unordered_map<std::string, int> slot_of_;
    std::vector<Node> nodes_;
    std::unordered_map<std::string, int> ids_;
    std::unordered_map<const Relation*, std::vector<Tuple>> tuples_;
    std::unordered_map<std::uint64_t, Count> memo_;
    std::vector<Count> true_count_;
    int true_ = 0, false_ = 0, root_ = 0;
};

inline void require_counting_domain(const Prenex& p, std::size_t n) {
    if (n == 0 && !p.prefix.empty()) throw DomainError("empty universe with a nonempty quantifier prefix");
}

}  // namespace detail

/// Number of winning strategies of the verifier for A |=_I phi (phi a prenex sentence).
inline Count count_win(const Formula& phi, const Structure& a, const InterpretationFamily& aux = {}) {
    Prenex p = as_prenex_sentence(phi);
    detail::require_counting_domain(p, a.universe_size());
    auto aux_structure = detail::aux_at(aux, a.universe_size());
    Model model(a, aux_structure ? &*aux_structure : nullptr);
    return detail::ResidualEngine(p, model).count();
}

/// The alternating sum/product as a literal nested loop over all n^m assignments.
inline Count count_win_nested(const Formula& phi, const Structure& a, const InterpretationFamily& aux = {}) {
    Prenex p = as_prenex_sentence(phi);
    std::size_t n = a.universe_size();
    detail::require_counting_domain(p, n);
    auto aux_structure = detail::aux_at(aux, n);
    Model model(a, aux_structure ? &*aux_structure : nullptr);
    std::vector<std::string> order;
    for (const auto& q : p.prefix) order.push_back(q.var);
    CompiledFormula matrix(p.matrix, model, order);
    std::vector<std::size_t> env(matrix.slot_count(), 0);
    auto loop = [&](auto&& self, std::size_t i) -> Count {
        if (i == p.prefix.size()) return matrix.eval_in(env) ? 1 : 0;
        Count acc = p.prefix[i].universal ? 1 : 0;
        for (std::size_t v = 0; v < n; ++v) {
            env[i] = v;
            Count c = self(self, i + 1);
            if (p.prefix[i].universal)
                acc *= c;
            else
                acc += c;
        }
        return acc;
    };
    return loop(loop, 0);
}

struct GameTreeReport {
    Count count;
    Count strategies;     // size of the verifier's strategy space
    bool enumerated = false;
    std::size_t nodes = 0;
};

/// Explicit model-checking game: builds every position, then counts verifier
/// strategies whose consistent plays all end in a true matrix. Strategy spaces
/// within the enumeration limit are checked one strategy at a time; larger ones
/// are counted by recursion over the materialized tree.
inline GameTreeReport count_win_gametree_report(const Formula& phi, const Structure& a,
                                                const InterpretationFamily& aux = {}, const Guards& guards = {}) {
    Prenex p = as_prenex_sentence(phi);
    std::size_t n = a.universe_size();
    if (n > guards.gametree_max_n || p.prefix.size() > guards.gametree_max_prefix)
        throw DomainError("game tree guard exceeded (n=" + std::to_string(n) + ", prefix=" +
                          std::to_string(p.prefix.size()) + ")");
    detail::require_counting_domain(p, n);
    auto aux_structure = detail::aux_at(aux, n);
    Model model(a, aux_structure ? &*aux_structure : nullptr);
    std::vector<std::string> order;
    for (const auto& q : p.prefix) order.push_back(q.var);
    CompiledFormula matrix(p.matrix, model, order);

    struct Position {
        bool verifier = false;
        bool leaf = false;
        bool win = false;
        std::vector<std::size_t> children;
        Count strategies;
        std::vector<Count> offsets;  // verifier: prefix sums of child strategy counts
    };
    std::vector<Position> tree;
    std::vector<std::size_t> env(matrix.slot_count(), 0);
    auto build = [&](auto&& self, std::size_t depth) -> std::size_t {
        std::size_t id = tree.size();
        tree.emplace_back();
        if (depth == p.prefix.size()) {
            tree[id].leaf = true;
            tree[id].win = matrix.eval_in(env);
            tree[id].strategies = 1;
            return id;
        }
        tree[id].verifier = !p.prefix[depth].universal;
        for (std::size_t v = 0; v < n; ++v) {
            env[depth] = v;
            std::size_t child = self(self, depth + 1);
            tree[id].children.push_back(child);
        }
        Count s = tree[id].verifier ? 0 : 1;
        for (std::size_t c : tree[id].children) {
            if (tree[id].verifier) {
                tree[id].offsets.push_back(s);
                s += tree[c].strategies;
            } else {
                s *= tree[c].strategies;
            }
        }
        tree[id].strategies = s;
        return id;
    };
    std::size_t root = build(build, 0);

    GameTreeReport report;
    report.nodes = tree.size();
    report.strategies = tree[root].strategies;
    if (report.strategies <= guards.gametree_enumeration_limit) {
        report.enumerated = true;
        // Strategy k is decoded in mixed radix: a verifier node picks the child
        // whose offset range contains k; a falsifier node splits k across all children.
        auto wins = [&](auto&& self, std::size_t node, Count k) -> bool {
            const Position& pos = tree[node];
            if (pos.leaf) return pos.win;
            if (pos.verifier) {
                std::size_t i = pos.children.size();
                while (i-- > 0)
                    if (pos.offsets[i] <= k) break;
                return self(self, pos.children[i], k - pos.offsets[i]);
            }
            for (std::size_t c : pos.children) {
                const Count& radix = tree[c].strategies;
                if (!self(self, c, k % radix)) return false;
                k /= radix;
            }
            return true;
        };
        Count winners = 0;
        for (Count k = 0; k < report.strategies; ++k)
            if (wins(wins, root, k)) ++winners;
        report.count = winners;
    } else {
        auto winning = [&](auto&& self, std::size_t node) -> Count {
            const Position& pos = tree[node];
            if (pos.leaf) return pos.win ? 1 : 0;
            Count acc = pos.verifier ? 0 : 1;
            for (std::size_t c : pos.children) {
                if (pos.verifier)
                    acc += self(self, c);
                else
                    acc *= self(self, c);
            }
            return acc;
        };
        report.count = winning(winning, root);
    }
    return report;
}

inline Count count_win_gametree(const Formula& phi, const Structure& a, const InterpretationFamily& aux = {},
                                const Guards& guards = {}) {
    return count_win_gametree_report(phi, a, aux, guards).count;
}

/// True iff the prefix is exists y1 forall z1 exists y2 ... exists yk.
inline bool is_skolem_shaped(const Prenex& p) {
    if (p.prefix.size() % 2 == 0) return false;
    for (std::size_t i = 0; i < p.prefix.size(); ++i)
        if (p.prefix[i].universal != (i % 2 == 1)) return false;
    return true;
}

/// Number of Skolem function tuples (f1..fk), f_i : |A|^(i-1) -> |A|, making the
/// matrix true for every assignment to the universal variables.
inline Count count_skolem(const Formula& phi, const Structure& a, const InterpretationFamily& aux = {},
                          const Guards& guards = {}) {
    Prenex p = as_prenex_sentence(phi);
    if (!is_skolem_shaped(p)) throw DomainError("count_skolem needs a prefix of the form exists forall ... exists");
    std::size_t n = a.universe_size();
    std::size_t k = (p.prefix.size() + 1) / 2;
    if (n > guards.skolem_max_n || k > guards.skolem_max_k)
        throw DomainError("Skolem enumeration guard exceeded (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
    detail::require_counting_domain(p, n);
    auto aux_structure = detail::aux_at(aux, n);
    Model model(a, aux_structure ? &*aux_structure : nullptr);
    std::vector<std::string> order;
    for (const auto& q : p.prefix) order.push_back(q.var);
    CompiledFormula matrix(p.matrix, model, order);

    // Tables of f_1..f_k laid out back to back; f_i has n^(i-1) entries.
    std::vector<std::size_t> table_offset(k + 1, 0);
    std::size_t width = 1;
    for (std::size_t i = 0; i < k; ++i) {
        table_offset[i + 1] = table_offset[i] + width;
        width *= n;
    }
    std::vector<std::size_t> table(table_offset[k], 0);
    std::size_t z_count = k - 1;
    std::size_t z_space = 1;
    for (std::size_t i = 0; i < z_count; ++i) z_space *= n;

    std::vector<std::size_t> env(matrix.slot_count(), 0);
    auto satisfied = [&]() {
        std::vector<std::size_t> z(z_count, 0);
        for (std::size_t zi = 0; zi < z_space; ++zi) {
            std::size_t rest = zi;
            for (std::size_t j = 0; j < z_count; ++j) {
                z[j] = rest % n;
                rest /= n;
            }
            for (std::size_t i = 0; i < k; ++i) {
                // f_{i+1}(z_1..z_i): index z_1..z_i in base n, z_1 most significant
                std::size_t idx = 0;
                for (std::size_t j = 0; j < i; ++j) idx = idx * n + z[j];
                env[2 * i] = table[table_offset[i] + idx];
                if (i < z_count) env[2 * i + 1] = z[i];
            }
            if (!matrix.eval_in(env)) return false;
        }
        return true;
    };

    Count total = 0;
    for (;;) {
        if (satisfied()) ++total;
        std::size_t pos = 0;
        while (pos < table.size() && ++table[pos] == n) table[pos++] = 0;
        if (pos == table.size()) break;
    }
    return total;
}

}  // namespace fowin
