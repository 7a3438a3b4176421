#pragma once

// Standard (Tarskian) model checking. Formulas are compiled once against a
// model into a slot-indexed program, then evaluated under many assignments.

#include "fowin/formula.hpp"
#include "fowin/structure.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fowin {

/// Relation lookup for one evaluation: the input structure, then the auxiliary
/// structure, then the built-ins (<=, +, *, bit) on the shared universe.
class Model {
  public:
    explicit Model(const Structure& input, const Structure* aux = nullptr) : input_(&input), aux_(aux) {
        if (aux && aux->universe_size() != input.universe_size())
            throw DomainError("auxiliary structure universe (" + std::to_string(aux->universe_size()) +
                              ") differs from input universe (" + std::to_string(input.universe_size()) + ")");
    }
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;

    std::size_t size() const { return input_->universe_size(); }

    const Relation& relation(const std::string& name, std::size_t arity) const {
        const Relation* r = input_->find(name);
        if (!r && aux_) r = aux_->find(name);
        if (!r) {
            if (!is_builtin_symbol(name) || name == "=") throw DomainError("unknown relation symbol '" + name + "'");
            std::lock_guard lock(mutex_);
            auto it = builtins_.find(name);
            if (it == builtins_.end())
                it = builtins_.emplace(name, std::make_unique<Relation>(builtin_relation(name, size()))).first;
            r = it->second.get();
        }
        if (r->arity() != arity)
            throw DomainError("arity mismatch for '" + name + "': expected " + std::to_string(r->arity()) + ", got " +
                              std::to_string(arity));
        return *r;
    }

  private:
    const Structure* input_;
    const Structure* aux_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, std::unique_ptr<Relation>> builtins_;
};

class CompiledFormula {
  public:
    /// `free_order` fixes the slot of each free variable; every free variable must be listed.
    CompiledFormula(const Formula& phi, const Model& model, const std::vector<std::string>& free_order)
        : n_(model.size()), free_count_(free_order.size()) {
        std::vector<std::pair<std::string, int>> scope;
        for (std::size_t i = 0; i < free_order.size(); ++i) scope.emplace_back(free_order[i], static_cast<int>(i));
        slots_ = static_cast<int>(free_order.size());
        root_ = compile(phi, model, scope);
    }

    std::size_t slot_count() const { return static_cast<std::size_t>(slots_); }

    /// `values` holds the free variables in `free_order` order.
    bool eval(std::span<const std::size_t> values) const {
        std::vector<std::size_t> env(static_cast<std::size_t>(slots_), 0);
        for (std::size_t i = 0; i < free_count_ && i < values.size(); ++i) env[i] = values[i];
        return run(root_, env);
    }

    bool eval_in(std::vector<std::size_t>& env) const { return run(root_, env); }

  private:
    static constexpr int kMin = -1;
    static constexpr int kMax = -2;

    struct CNode {
        Op op = Op::truth;
        const Relation* rel = nullptr;
        bool equality = false;
        std::vector<int> args;
        std::vector<int> kids;
        int slot = -1;
    };

    int compile(const Formula& phi, const Model& model, std::vector<std::pair<std::string, int>>& scope) {
        CNode c;
        c.op = phi->op;
        switch (phi->op) {
        case Op::truth:
        case Op::falsity:
            break;
        case Op::atom: {
            for (const auto& t : phi->args) c.args.push_back(resolve(t, scope));
            if (phi->symbol == "=") {
                if (c.args.size() != 2) throw DomainError("arity mismatch for '=': expected 2");
                c.equality = true;
            } else {
                c.rel = &model.relation(phi->symbol, c.args.size());
            }
            break;
        }
        case Op::count_bit:
            throw DomainError("#-atoms need the two-sorted evaluator");
        case Op::exists:
        case Op::forall: {
            c.slot = slots_++;
            scope.emplace_back(phi->var, c.slot);
            c.kids.push_back(compile(phi->kids[0], model, scope));
            scope.pop_back();
            break;
        }
        default:
            for (const auto& k : phi->kids) c.kids.push_back(compile(k, model, scope));
        }
        nodes_.push_back(std::move(c));
        return static_cast<int>(nodes_.size() - 1);
    }

    int resolve(const Term& t, const std::vector<std::pair<std::string, int>>& scope) const {
        if (t.kind != Term::Kind::variable) {
            if (n_ == 0) throw DomainError("(min)/(max) used over an empty universe");
            return t.kind == Term::Kind::min ? kMin : kMax;
        }
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
            if (it->first == t.name) return it->second;
        throw DomainError("unbound variable '" + t.name + "'");
    }

    std::size_t value(int a, const std::vector<std::size_t>& env) const {
        if (a == kMin) return 0;
        if (a == kMax) return n_ - 1;
        return env[static_cast<std::size_t>(a)];
    }

    bool run(int id, std::vector<std::size_t>& env) const {
        const CNode& c = nodes_[static_cast<std::size_t>(id)];
        switch (c.op) {
        case Op::truth: return true;
        case Op::falsity: return false;
        case Op::atom: {
            if (c.equality) return value(c.args[0], env) == value(c.args[1], env);
            std::size_t idx = 0;
            for (int a : c.args) idx = idx * n_ + value(a, env);
            return c.rel->bit(idx);
        }
        case Op::negation: return !run(c.kids[0], env);
        case Op::conjunction:
            for (int k : c.kids)
                if (!run(k, env)) return false;
            return true;
        case Op::disjunction:
            for (int k : c.kids)
                if (run(k, env)) return true;
            return false;
        case Op::exists:
        case Op::forall: {
            bool universal = c.op == Op::forall;
            auto& slot = env[static_cast<std::size_t>(c.slot)];
            for (std::size_t v = 0; v < n_; ++v) {
                slot = v;
                if (run(c.kids[0], env) != universal) return !universal;
            }
            return universal;
        }
        default: return false;
        }
    }

    std::size_t n_;
    std::size_t free_count_;
    int slots_ = 0;
    int root_ = 0;
    std::vector<CNode> nodes_;
};

using Assignment = std::map<std::string, std::size_t>;

/// Truth of phi in A (auxiliary symbols from I at |A|) under an assignment of its free variables.
inline bool evaluate(const Formula& phi, const Structure& a, const InterpretationFamily& aux,
                     const Assignment& assignment = {}) {
    std::optional<Structure> aux_structure;
    if (!aux.empty()) aux_structure = aux.at(a.universe_size());
    Model model(a, aux_structure ? &*aux_structure : nullptr);
    std::vector<std::string> order;
    std::vector<std::size_t> values;
    for (const auto& v : free_variables(phi)) {
        auto it = assignment.find(v);
        if (it == assignment.end()) throw DomainError("unbound variable '" + v + "'");
        if (it->second >= a.universe_size()) throw DomainError("value of '" + v + "' is outside the universe");
        order.push_back(v);
        values.push_back(it->second);
    }
    return CompiledFormula(phi, model, order).eval(values);
}

inline bool evaluate(const Formula& phi, const Structure& a, const Assignment& assignment = {}) {
    return evaluate(phi, a, InterpretationFamily::none(), assignment);
}

}  // namespace fowin
