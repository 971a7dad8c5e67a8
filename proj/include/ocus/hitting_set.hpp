#pragma once

// Exact solver for cost-minimal hitting sets under a side constraint:
// either trivially true or "pick exactly one element of a designated
// domain". Sets-to-hit accumulate across solves and an activation mask
// restricts which elements may be picked, so one instance can serve a
// whole sequence of related queries.
//
// solve() works in two phases. A branch-and-bound pass finds the
// optimal cost, pruning with a greedy disjoint-set packing bound and
// branching on the exactly-one domain first. A second pass then builds
// the lexicographically smallest index set of that cost by deciding
// candidate elements in ascending order against a bounded feasibility
// search. Candidates are the elements of the active set views plus the
// active exactly-one domain; inactive elements are excluded outright
// rather than via sentinel weights.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ocus/core.hpp"

namespace ocus {

class MetaConstraint {
public:
    enum class Kind { TriviallyTrue, ExactlyOne };

    static MetaConstraint trivially_true() { return MetaConstraint(Kind::TriviallyTrue, {}); }
    static MetaConstraint exactly_one(IndexSet domain) {
        if (domain.empty())
            throw std::invalid_argument("exactly-one constraint needs a non-empty domain");
        return MetaConstraint(Kind::ExactlyOne, std::move(domain));
    }

    Kind kind() const { return kind_; }
    const IndexSet& domain() const { return domain_; }

    bool holds(const IndexSet& s) const {
        if (kind_ == Kind::TriviallyTrue) return true;
        return s.intersect(domain_).size() == 1;
    }

private:
    MetaConstraint(Kind k, IndexSet d) : kind_(k), domain_(std::move(d)) {}
    Kind kind_;
    IndexSet domain_;
};

struct HsSolution {
    IndexSet set;
    Cost cost = 0;
};

class HittingSetInstance {
public:
    HittingSetInstance(IndexSet universe, std::vector<Cost> weights, MetaConstraint constraint)
        : universe_(std::move(universe)),
          weights_(std::move(weights)),
          constraint_(std::move(constraint)),
          active_(universe_) {
        int max_elem = universe_.empty() ? -1 : universe_.indices().back();
        if (static_cast<int>(weights_.size()) <= max_elem)
            throw std::invalid_argument("weight table does not cover the universe");
        for (int e : universe_)
            if (weights_[static_cast<size_t>(e)] < 0)
                throw std::invalid_argument("negative element weight");
        if (constraint_.kind() == MetaConstraint::Kind::ExactlyOne &&
            !constraint_.domain().subset_of(universe_))
            throw std::invalid_argument("exactly-one domain outside universe");
    }

    static HittingSetInstance for_formula(const CnfFormula& f, MetaConstraint constraint) {
        std::vector<Cost> w(static_cast<size_t>(f.size()));
        for (int i = 0; i < f.size(); ++i) w[static_cast<size_t>(i)] = f.weight(i);
        return HittingSetInstance(f.all_indices(), std::move(w), std::move(constraint));
    }

    const IndexSet& universe() const { return universe_; }
    const IndexSet& active() const { return active_; }
    const MetaConstraint& constraint() const { return constraint_; }
    Cost weight(int e) const { return weights_.at(static_cast<size_t>(e)); }
    const std::vector<IndexSet>& sets() const { return sets_; }

    // Appends a set-to-hit. Duplicates are ignored; an empty set makes
    // the instance permanently infeasible.
    void add_set(const IndexSet& to_hit) {
        if (!to_hit.subset_of(universe_))
            throw std::out_of_range("set-to-hit contains elements outside the universe");
        if (!known_sets_.insert(to_hit.indices()).second) return;
        sets_.push_back(to_hit);
    }

    void set_active(IndexSet active) {
        if (!active.subset_of(universe_))
            throw std::out_of_range("active mask outside the universe");
        if (active == active_) return;
        active_ = std::move(active);
        views_built_ = 0;
    }

    // One line per stored set, insertion order, sorted indices.
    std::string dump() const {
        std::ostringstream os;
        for (const auto& s : sets_) {
            const auto& v = s.indices();
            for (size_t i = 0; i < v.size(); ++i) {
                if (i) os << ' ';
                os << v[i];
            }
            os << '\n';
        }
        return os.str();
    }

    std::optional<HsSolution> solve() {
        refresh_views();
        if (infeasible_view_) return std::nullopt;

        SearchCtx ctx(*this, /*decision=*/false);
        ctx.best = greedy_upper_bound(ctx);
        ctx.run();
        if (ctx.best >= kInf) return std::nullopt;
        return HsSolution{lex_smallest(ctx.best), ctx.best};
    }

private:
    static constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;

    bool has_domain_view() const {
        return constraint_.kind() == MetaConstraint::Kind::ExactlyOne;
    }

    // Views are the stored sets intersected with the active mask, plus a
    // virtual view 0 for the exactly-one domain so the generic search
    // enforces its at-least-one half; the at-most-one half is enforced
    // by banning the rest of the domain whenever a domain element is
    // picked. Views and occurrence lists extend incrementally while the
    // active mask is unchanged.
    void refresh_views() {
        size_t want = sets_.size() + (has_domain_view() ? 1 : 0);
        if (views_built_ == 0) {
            views_.clear();
            occ_.assign(occ_span(), {});
            candidates_.clear();
            infeasible_view_ = false;
            domain_view_.clear();
            in_domain_.assign(occ_span(), 0);
            if (has_domain_view()) {
                IndexSet d = constraint_.domain().intersect(active_);
                domain_view_ = d.indices();
                for (int e : domain_view_) in_domain_[static_cast<size_t>(e)] = 1;
                append_view(std::move(d));
            }
        }
        for (size_t k = views_.size(); k < want; ++k)
            append_view(sets_[k - (has_domain_view() ? 1 : 0)].intersect(active_));
        views_built_ = views_.size();
    }

    size_t occ_span() const {
        return universe_.empty() ? 1 : static_cast<size_t>(universe_.indices().back()) + 1;
    }

    void append_view(IndexSet view) {
        int k = static_cast<int>(views_.size());
        if (view.empty()) infeasible_view_ = true;
        for (int e : view) {
            if (occ_[static_cast<size_t>(e)].empty())
                candidates_.insert(std::lower_bound(candidates_.begin(), candidates_.end(), e), e);
            occ_[static_cast<size_t>(e)].push_back(k);
        }
        views_.push_back(std::move(view));
    }

    struct SearchCtx {
        HittingSetInstance& hs;
        std::vector<int> hit_count;
        std::vector<uint8_t> banned;
        std::vector<int> chosen;
        std::vector<int> used_ver;
        int used_cur = 0;
        size_t unhit;
        Cost cost = 0;
        Cost best = kInf;  // optimization: best cost so far; decision: budget
        bool decision;
        bool found = false;

        SearchCtx(HittingSetInstance& h, bool dec)
            : hs(h),
              hit_count(h.views_.size(), 0),
              banned(h.occ_span(), 0),
              used_ver(h.occ_span(), 0),
              unhit(h.views_.size()),
              decision(dec) {}

        void include(int e) {
            chosen.push_back(e);
            cost += hs.weights_[static_cast<size_t>(e)];
            for (int k : hs.occ_[static_cast<size_t>(e)])
                if (hit_count[static_cast<size_t>(k)]++ == 0) --unhit;
        }
        void undo_include(int e) {
            chosen.pop_back();
            cost -= hs.weights_[static_cast<size_t>(e)];
            for (int k : hs.occ_[static_cast<size_t>(e)])
                if (--hit_count[static_cast<size_t>(k)] == 0) ++unhit;
        }

        // Greedy disjoint-packing lower bound over the unhit views, and
        // the branching pick: the unhit view with the fewest allowed
        // elements, the exactly-one domain taking precedence. Returns
        // kInf when some view became unhittable.
        Cost bound_and_pick(int& pick) {
            pick = -1;
            size_t pick_width = std::numeric_limits<size_t>::max();
            ++used_cur;
            Cost lb = 0;
            for (size_t k = 0; k < hs.views_.size(); ++k) {
                if (hit_count[k] > 0) continue;
                Cost minw = kInf;
                size_t width = 0;
                bool disjoint = true;
                for (int e : hs.views_[k].indices()) {
                    if (banned[static_cast<size_t>(e)]) continue;
                    ++width;
                    if (used_ver[static_cast<size_t>(e)] == used_cur) disjoint = false;
                    Cost w = hs.weights_[static_cast<size_t>(e)];
                    if (w < minw) minw = w;
                }
                if (width == 0) return kInf;
                if (disjoint) {
                    lb += minw;
                    for (int e : hs.views_[k].indices())
                        if (!banned[static_cast<size_t>(e)]) used_ver[static_cast<size_t>(e)] = used_cur;
                }
                if (hs.is_domain_view(k)) {
                    pick = static_cast<int>(k);
                    pick_width = 0;
                } else if (width < pick_width) {
                    pick = static_cast<int>(k);
                    pick_width = width;
                }
            }
            return lb;
        }

        void run() {
            if (unhit == 0) {
                if (decision) {
                    if (cost <= best) found = true;
                } else if (cost < best) {
                    best = cost;
                }
                return;
            }
            int pick = -1;
            Cost lb = bound_and_pick(pick);
            if (lb >= kInf) return;
            if (decision ? (cost + lb > best) : (cost + lb >= best)) return;
            std::vector<int> banned_here;
            for (int e : hs.views_[static_cast<size_t>(pick)].indices()) {
                if (banned[static_cast<size_t>(e)]) continue;
                include(e);
                std::vector<int> sibling_bans;
                if (hs.in_domain_[static_cast<size_t>(e)]) {
                    for (int d : hs.domain_view_)
                        if (d != e && !banned[static_cast<size_t>(d)]) {
                            banned[static_cast<size_t>(d)] = 1;
                            sibling_bans.push_back(d);
                        }
                }
                run();
                for (int d : sibling_bans) banned[static_cast<size_t>(d)] = 0;
                undo_include(e);
                if (decision && found) break;
                banned[static_cast<size_t>(e)] = 1;
                banned_here.push_back(e);
            }
            for (int e : banned_here) banned[static_cast<size_t>(e)] = 0;
        }
    };

    bool is_domain_view(size_t k) const { return has_domain_view() && k == 0; }

    // Quick feasible solution: satisfy each unhit view in order with its
    // cheapest allowed element. Returns kInf when stuck; the result only
    // seeds pruning, the search still proves optimality.
    Cost greedy_upper_bound(SearchCtx& ctx) {
        std::vector<int> picked;
        bool stuck = false;
        for (size_t k = 0; k < views_.size() && !stuck; ++k) {
            if (ctx.hit_count[k] > 0) continue;
            Cost minw = kInf;
            int arg = -1;
            for (int e : views_[k].indices()) {
                if (ctx.banned[static_cast<size_t>(e)]) continue;
                Cost w = weights_[static_cast<size_t>(e)];
                if (w < minw) {
                    minw = w;
                    arg = e;
                }
            }
            if (arg < 0) {
                stuck = true;
                break;
            }
            ctx.include(arg);
            picked.push_back(arg);
            if (in_domain_[static_cast<size_t>(arg)])
                for (int d : domain_view_)
                    if (d != arg) ctx.banned[static_cast<size_t>(d)] = 1;
        }
        Cost total = stuck ? kInf : ctx.cost;
        for (int d : domain_view_) ctx.banned[static_cast<size_t>(d)] = 0;
        for (auto it = picked.rbegin(); it != picked.rend(); ++it) ctx.undo_include(*it);
        return total;
    }

    // Lexicographically smallest hitting set of exactly the optimal
    // cost: decide candidates in ascending order, keeping an element iff
    // a completion within the budget still exists with it included.
    IndexSet lex_smallest(Cost opt) {
        SearchCtx ctx(*this, /*decision=*/true);
        ctx.best = opt;
        std::vector<int> taken;
        for (int e : candidates_) {
            if (ctx.unhit == 0) break;  // positive weights: nothing more fits
            if (ctx.banned[static_cast<size_t>(e)]) continue;
            // With positive weight, an element that hits no unhit view
            // cannot join a completion that still meets the budget.
            if (weights_[static_cast<size_t>(e)] > 0) {
                bool useful = false;
                for (int k : occ_[static_cast<size_t>(e)])
                    if (ctx.hit_count[static_cast<size_t>(k)] == 0) {
                        useful = true;
                        break;
                    }
                if (!useful) continue;
            }
            include_and_decide(ctx, e, opt, taken);
        }
        if (ctx.unhit != 0 || ctx.cost != opt)
            throw std::logic_error("hitting-set lex reconstruction failed");
        return IndexSet(std::move(taken));
    }

    void include_and_decide(SearchCtx& ctx, int e, Cost opt, std::vector<int>& taken) {
        ctx.include(e);
        std::vector<int> sibling_bans;
        if (in_domain_[static_cast<size_t>(e)]) {
            for (int d : domain_view_)
                if (d != e && !ctx.banned[static_cast<size_t>(d)]) {
                    ctx.banned[static_cast<size_t>(d)] = 1;
                    sibling_bans.push_back(d);
                }
        }
        ctx.found = false;
        if (ctx.cost <= opt) ctx.run();
        if (ctx.found) {
            taken.push_back(e);
        } else {
            for (int d : sibling_bans) ctx.banned[static_cast<size_t>(d)] = 0;
            ctx.undo_include(e);
            ctx.banned[static_cast<size_t>(e)] = 1;
        }
    }

    IndexSet universe_;
    std::vector<Cost> weights_;
    MetaConstraint constraint_;
    IndexSet active_;
    std::vector<IndexSet> sets_;
    std::set<std::vector<int>> known_sets_;

    // incrementally maintained per-active-mask views
    std::vector<IndexSet> views_;
    std::vector<std::vector<int>> occ_;
    std::vector<int> candidates_;
    std::vector<int> domain_view_;
    std::vector<uint8_t> in_domain_;
    bool infeasible_view_ = false;
    size_t views_built_ = 0;
};

}  // namespace ocus
