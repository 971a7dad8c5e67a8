#pragma once

// Conflict-driven clause learning engine shared by the SAT oracle and
// the MaxSAT solver. Every clause i of the input formula is guarded by
// a selector variable s_i and stored as (~s_i v clause), so a clause
// subset is activated per call through assumptions instead of rebuilds.
//
// Branching is pinned for reproducibility: decisions pick the lowest
// unassigned variable, atoms take their hinted polarity (default
// false), selectors default to true. Decisions always try the
// preferred value first and flipped values only ever enter the trail
// as entailed propagations, so the first model found is the
// lexicographically smallest one under that preference order -- the
// same model on every call, independent of learned-clause state.
//
// For MaxSAT the core enforces one linear bound over soft selector
// variables, sum(w_i * s_i) >= bound, with a counting propagator whose
// conflicts and reasons are synthesized from the falsified softs.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ocus/core.hpp"

namespace ocus::detail {

class CdclCore {
public:
    static constexpr int kNoReason = -1;
    static constexpr int kPbReason = -2;
    static constexpr int kPbConflict = -3;
    static constexpr int kNoConflict = -4;

    explicit CdclCore(const CnfFormula& f) : formula_(&f) {
        natoms_ = f.atom_count();
        nvars_ = natoms_ + f.size();
        values_.assign(static_cast<size_t>(nvars_) + 1, 0);
        level_.assign(static_cast<size_t>(nvars_) + 1, 0);
        reason_.assign(static_cast<size_t>(nvars_) + 1, kNoReason);
        trail_pos_.assign(static_cast<size_t>(nvars_) + 1, 0);
        seen_.assign(static_cast<size_t>(nvars_) + 1, 0);
        soft_weight_.assign(static_cast<size_t>(nvars_) + 1, 0);
        hint_.assign(static_cast<size_t>(natoms_) + 1, 0);
        watches_.assign(2 * (static_cast<size_t>(nvars_) + 1), {});

        std::vector<int> lits;
        for (int i = 0; i < f.size(); ++i) {
            lits.clear();
            lits.push_back(-selector_var(i));
            for (Lit l : f.clause(i).literals()) lits.push_back(l.code());
            if (lits.size() == 1) {
                // Empty input clause: its selector is false in every model.
                if (value(lits[0]) == 0) unchecked_enqueue(lits[0], kNoReason);
            } else {
                attach(alloc_clause(lits));
            }
        }
    }

    int selector_var(int clause_idx) const { return natoms_ + 1 + clause_idx; }
    int natoms() const { return natoms_; }

    // Installs the soft objective sum(w * s_i) with bound 0 over the
    // given (clause index, weight) pairs. Resets any previous objective.
    void set_objective(const std::vector<std::pair<int, Cost>>& clause_weights) {
        for (auto [v, w] : soft_order_) soft_weight_[static_cast<size_t>(v)] = 0;
        soft_order_.clear();
        total_soft_ = 0;
        for (auto [ci, w] : clause_weights) {
            if (w <= 0) throw std::invalid_argument("soft weight must be positive");
            int v = selector_var(ci);
            soft_weight_[static_cast<size_t>(v)] = w;
            soft_order_.emplace_back(v, w);
            total_soft_ += w;
        }
        std::sort(soft_order_.begin(), soft_order_.end(), [](auto a, auto b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        bound_ = 0;
        recompute_falsified();
    }

    // The bound may only grow; learned clauses stay valid then.
    void set_bound(Cost k) {
        assert(k >= bound_);
        bound_ = k;
    }

    // Assumptions are placed one per level in the given order before any
    // real decision. `atom_hint` is indexed by atom (entries -1/0/+1).
    bool solve(const std::vector<int>& assumptions, const std::vector<int8_t>& atom_hint) {
        cancel_until(0);
        if (global_unsat_) return false;
        for (size_t a = 1; a < hint_.size(); ++a)
            hint_[a] = a < atom_hint.size() ? atom_hint[a] : 0;
        qhead_ = 0;
        order_head_ = 1;

        for (;;) {
            int confl = propagate();
            if (confl != kNoConflict) {
                if (current_level() == 0) {
                    if (confl != kPbConflict) global_unsat_ = true;
                    return false;
                }
                int btlevel = 0;
                analyze(confl, learnt_, btlevel);
                cancel_until(btlevel);
                if (learnt_.size() == 1) {
                    unchecked_enqueue(learnt_[0], kNoReason);
                } else {
                    int ref = alloc_clause(learnt_);
                    learned_refs_.push_back(ref);
                    ++learned_live_;
                    attach(ref);
                    unchecked_enqueue(learnt_[0], ref);
                }
                if (learned_live_ > reduce_threshold_) reduce_learned();
                continue;
            }
            int next = 0;
            while (current_level() < static_cast<int>(assumptions.size())) {
                int a = assumptions[static_cast<size_t>(current_level())];
                int va = value(a);
                if (va > 0) {
                    trail_lim_.push_back(static_cast<int>(trail_.size()));
                } else if (va < 0) {
                    return false;  // conflicting assumption
                } else {
                    next = a;
                    break;
                }
            }
            if (next == 0) {
                next = pick_branch();
                if (next == 0) return true;  // full assignment
            }
            trail_lim_.push_back(static_cast<int>(trail_.size()));
            unchecked_enqueue(next, kNoReason);
        }
    }

    // Valid after solve() returned true.
    int8_t value_of_atom(int atom) const { return values_[static_cast<size_t>(atom)]; }

private:
    static size_t widx(int lit) {
        return lit > 0 ? 2 * static_cast<size_t>(lit) : 2 * static_cast<size_t>(-lit) + 1;
    }

    int value(int lit) const {
        int8_t v = values_[static_cast<size_t>(std::abs(lit))];
        return lit > 0 ? v : -v;
    }

    int current_level() const { return static_cast<int>(trail_lim_.size()); }

    int alloc_clause(const std::vector<int>& lits) {
        int ref;
        if (free_slots_.empty()) {
            ref = static_cast<int>(clauses_.size());
            clauses_.push_back(lits);
        } else {
            ref = free_slots_.back();
            free_slots_.pop_back();
            clauses_[static_cast<size_t>(ref)] = lits;
        }
        return ref;
    }

    void attach(int ref) {
        const auto& cl = clauses_[static_cast<size_t>(ref)];
        watches_[widx(cl[0])].push_back(ref);
        watches_[widx(cl[1])].push_back(ref);
    }

    void unchecked_enqueue(int lit, int reason) {
        int v = std::abs(lit);
        values_[static_cast<size_t>(v)] = lit > 0 ? 1 : -1;
        level_[static_cast<size_t>(v)] = current_level();
        reason_[static_cast<size_t>(v)] = reason;
        trail_pos_[static_cast<size_t>(v)] = static_cast<int>(trail_.size());
        trail_.push_back(lit);
        if (lit < 0 && soft_weight_[static_cast<size_t>(v)]) falsified_ += soft_weight_[static_cast<size_t>(v)];
    }

    void cancel_until(int lvl) {
        if (current_level() <= lvl) return;
        int bound = trail_lim_[static_cast<size_t>(lvl)];
        for (int c = static_cast<int>(trail_.size()) - 1; c >= bound; --c) {
            int lit = trail_[static_cast<size_t>(c)];
            int v = std::abs(lit);
            if (lit < 0 && soft_weight_[static_cast<size_t>(v)]) falsified_ -= soft_weight_[static_cast<size_t>(v)];
            values_[static_cast<size_t>(v)] = 0;
            reason_[static_cast<size_t>(v)] = kNoReason;
            if (v < order_head_) order_head_ = v;
        }
        trail_.resize(static_cast<size_t>(bound));
        trail_lim_.resize(static_cast<size_t>(lvl));
        qhead_ = trail_.size();
    }

    bool pb_enabled() const { return bound_ > 0; }

    int propagate() {
        for (;;) {
            while (qhead_ < trail_.size()) {
                int p = trail_[qhead_++];
                auto& wl = watches_[widx(-p)];
                size_t i = 0, j = 0;
                int confl = kNoConflict;
                while (i < wl.size()) {
                    int ref = wl[i++];
                    auto& clause = clauses_[static_cast<size_t>(ref)];
                    if (clause.empty()) continue;  // purged clause
                    int size = static_cast<int>(clause.size());
                    int* lits = clause.data();
                    if (lits[0] == -p) std::swap(lits[0], lits[1]);
                    // a freed slot may have been reused by a clause that
                    // does not watch this literal; drop such stale entries
                    if (lits[1] != -p) continue;
                    int first = lits[0];
                    if (value(first) > 0) {
                        wl[j++] = ref;
                        continue;
                    }
                    bool moved = false;
                    for (int k = 2; k < size; ++k) {
                        if (value(lits[k]) >= 0) {
                            std::swap(lits[1], lits[k]);
                            watches_[widx(lits[1])].push_back(ref);
                            moved = true;
                            break;
                        }
                    }
                    if (moved) continue;
                    wl[j++] = ref;
                    if (value(first) < 0) {
                        confl = ref;
                        while (i < wl.size()) wl[j++] = wl[i++];
                        qhead_ = trail_.size();
                    } else {
                        unchecked_enqueue(first, ref);
                    }
                }
                wl.resize(j);
                if (confl != kNoConflict) return confl;
            }
            if (!pb_enabled()) return kNoConflict;
            Cost achievable = total_soft_ - falsified_;
            if (achievable < bound_) return kPbConflict;
            Cost slack = achievable - bound_;
            bool enqueued = false;
            for (auto [v, w] : soft_order_) {
                if (w <= slack) break;
                if (values_[static_cast<size_t>(v)] == 0) {
                    unchecked_enqueue(v, kPbReason);
                    enqueued = true;
                }
            }
            if (!enqueued) return kNoConflict;
        }
    }

    void collect_pb_conflict(std::vector<int>& out) const {
        for (auto [v, w] : soft_order_)
            if (values_[static_cast<size_t>(v)] < 0) out.push_back(v);
    }

    void collect_pb_reason(int p, std::vector<int>& out) const {
        int pos = trail_pos_[static_cast<size_t>(std::abs(p))];
        for (auto [v, w] : soft_order_)
            if (values_[static_cast<size_t>(v)] < 0 && trail_pos_[static_cast<size_t>(v)] < pos)
                out.push_back(v);
    }

    // First-UIP conflict analysis; learnt[0] is the asserting literal,
    // learnt[1] (when present) sits at the backjump level.
    void analyze(int confl, std::vector<int>& learnt, int& btlevel) {
        learnt.clear();
        learnt.push_back(0);
        int path = 0;
        int p = 0;
        size_t index = trail_.size();
        do {
            scratch_.clear();
            if (confl == kPbConflict) {
                collect_pb_conflict(scratch_);
            } else if (confl == kPbReason) {
                collect_pb_reason(p, scratch_);
            } else {
                assert(confl >= 0 && !clauses_[static_cast<size_t>(confl)].empty());
                for (int q : clauses_[static_cast<size_t>(confl)])
                    if (q != p) scratch_.push_back(q);
            }
            for (int q : scratch_) {
                int v = std::abs(q);
                if (!seen_[static_cast<size_t>(v)] && level_[static_cast<size_t>(v)] > 0) {
                    seen_[static_cast<size_t>(v)] = 1;
                    if (level_[static_cast<size_t>(v)] >= current_level())
                        ++path;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen_[static_cast<size_t>(std::abs(trail_[index - 1]))]) --index;
            --index;
            p = trail_[index];
            int v = std::abs(p);
            confl = reason_[static_cast<size_t>(v)];
            seen_[static_cast<size_t>(v)] = 0;
            --path;
        } while (path > 0);
        learnt[0] = -p;

        btlevel = 0;
        if (learnt.size() > 1) {
            size_t maxi = 1;
            for (size_t k = 2; k < learnt.size(); ++k)
                if (level_[static_cast<size_t>(std::abs(learnt[k]))] >
                    level_[static_cast<size_t>(std::abs(learnt[maxi]))])
                    maxi = k;
            std::swap(learnt[1], learnt[maxi]);
            btlevel = level_[static_cast<size_t>(std::abs(learnt[1]))];
        }
        for (int q : learnt) seen_[static_cast<size_t>(std::abs(q))] = 0;
    }

    bool locked(int ref) const {
        int lit = clauses_[static_cast<size_t>(ref)][0];
        return value(lit) > 0 && reason_[static_cast<size_t>(std::abs(lit))] == ref;
    }

    // Frees long learned clauses; watch lists shed dead entries lazily.
    void reduce_learned() {
        size_t keep = 0;
        for (size_t k = 0; k < learned_refs_.size(); ++k) {
            int ref = learned_refs_[k];
            auto& cl = clauses_[static_cast<size_t>(ref)];
            if (cl.empty()) continue;
            if (cl.size() > 3 && !locked(ref)) {
                std::vector<int>().swap(cl);
                free_slots_.push_back(ref);
                --learned_live_;
            } else {
                learned_refs_[keep++] = ref;
            }
        }
        learned_refs_.resize(keep);
        reduce_threshold_ = std::max<size_t>(20000, learned_live_ * 2);
    }

    void recompute_falsified() {
        falsified_ = 0;
        for (int lit : trail_)
            if (lit < 0 && soft_weight_[static_cast<size_t>(-lit)]) falsified_ += soft_weight_[static_cast<size_t>(-lit)];
    }

    int pick_branch() {
        while (order_head_ <= nvars_ && values_[static_cast<size_t>(order_head_)] != 0) ++order_head_;
        if (order_head_ > nvars_) return 0;
        int v = order_head_;
        int pol = v <= natoms_ ? (hint_[static_cast<size_t>(v)] != 0 ? hint_[static_cast<size_t>(v)] : -1) : 1;
        return pol > 0 ? v : -v;
    }

    const CnfFormula* formula_;
    int natoms_ = 0;
    int nvars_ = 0;

    std::vector<std::vector<int>> clauses_;
    std::vector<int> free_slots_;
    std::vector<std::vector<int>> watches_;
    std::vector<int8_t> values_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<int> trail_pos_;
    std::vector<int8_t> seen_;
    std::vector<int> trail_;
    std::vector<int> trail_lim_;
    size_t qhead_ = 0;
    int order_head_ = 1;
    bool global_unsat_ = false;

    std::vector<int8_t> hint_;
    std::vector<int> learnt_;
    std::vector<int> scratch_;
    std::vector<int> learned_refs_;
    size_t learned_live_ = 0;
    size_t reduce_threshold_ = 20000;

    // soft objective state
    std::vector<Cost> soft_weight_;
    std::vector<std::pair<int, Cost>> soft_order_;
    Cost total_soft_ = 0;
    Cost falsified_ = 0;
    Cost bound_ = 0;
};

}  // namespace ocus::detail
