#pragma once

#include <algorithm>
#include <limits>
#include <span>
#include <unordered_set>
#include <vector>

#include "mssc/pricing.hpp"
#include "mssc/random.hpp"

namespace mssc {

namespace detail {

// Two independent 64-bit keys per point; a set is identified by the XOR of
// its members' keys.
struct SetKey {
    std::uint64_t a = 0, b = 0;
    bool operator==(const SetKey&) const = default;
    SetKey& operator^=(const SetKey& o) {
        a ^= o.a;
        b ^= o.b;
        return *this;
    }
};
struct SetKeyHash {
    std::size_t operator()(const SetKey& k) const noexcept { return static_cast<std::size_t>(k.a ^ (k.b * 31)); }
};

// Scores candidate point sets, deduplicates them and keeps the best
// `max_columns` negative ones overall and among those compatible with Q.
// Sets arrive either as explicit member lists or as a running set, updated one
// point at a time, plus up to two extra points.
class ColumnCollector {
public:
    ColumnCollector(const Instance& inst, std::span<const double> lambda, double sigma, double tol,
                    const AggregationPartition* q = nullptr,
                    std::size_t max_columns = std::numeric_limits<std::size_t>::max())
        : inst_(inst), lambda_(lambda), sigma_(sigma), tol_(tol), q_(q), max_columns_(max_columns) {
        const std::size_t n = inst.size();
        Point mean;
        for (const auto& p : inst.points()) {
            mean.x += p.x;
            mean.y += p.y;
        }
        mean.x /= static_cast<double>(n);
        mean.y /= static_cast<double>(n);
        shifted_.reserve(n);
        for (const auto& p : inst.points()) shifted_.push_back({p.x - mean.x, p.y - mean.y});
        keys_.resize(n);
        Rng rng(0x6d737363);
        for (auto& k : keys_) k = {rng(), rng()};
        if (q_) {
            comp_.resize(n);
            for (std::size_t i = 0; i < n; ++i) comp_[i] = q_->component_of(i);
            comp_size_.resize(q_->size());
            for (std::size_t j = 0; j < q_->size(); ++j) comp_size_[j] = q_->components()[j].members.size();
            cnt_.assign(q_->size(), 0);
            scratch_.assign(q_->size(), 0);
        }
        cur_ = PointSet(n);
    }

    void visit(const std::vector<std::size_t>& members) {
        if (members.empty()) return;
        SetKey key;
        ClusterStats st;
        double lam = 0.0;
        for (auto i : members) {
            key ^= keys_[i];
            st.add(shifted_[i]);
            lam += lambda_[i];
        }
        std::size_t bad = 0;
        if (q_) {
            for (auto i : members) ++scratch_[comp_[i]];
            for (auto i : members) {
                auto& c = scratch_[comp_[i]];
                if (c == 0) continue;
                bad += c < comp_size_[comp_[i]];
                c = 0;
            }
        }
        score(key, st, lam, bad == 0, [&] { return PointSet::from(inst_.size(), members); });
    }

    // Running set.
    void clear_running() {
        cur_.for_each([&](std::size_t i) {
            if (q_) cnt_[comp_[i]] = 0;
        });
        cur_ = PointSet(inst_.size());
        cur_key_ = {};
        cur_st_ = {};
        cur_lam_ = 0.0;
        cur_bad_ = 0;
    }
    void set_running(std::size_t i, bool in) {
        if (cur_.contains(i) == in) return;
        const double s = in ? 1.0 : -1.0;
        in ? cur_.insert(i) : cur_.erase(i);
        cur_key_ ^= keys_[i];
        cur_st_.add(shifted_[i], s);
        cur_lam_ += s * lambda_[i];
        if (q_) {
            const std::size_t j = comp_[i];
            cur_bad_ -= is_bad(j, cnt_[j]);
            in ? ++cnt_[j] : --cnt_[j];
            cur_bad_ += is_bad(j, cnt_[j]);
        }
    }
    // Scores running ∪ S for every S ⊆ {a, b} (b == a gives two sets).
    void visit_running(std::size_t a, std::size_t b) {
        const std::size_t extra[2] = {a, b};
        const std::size_t combos = a == b ? 2 : 4;
        for (std::size_t mask = 0; mask < combos; ++mask) {
            SetKey key = cur_key_;
            ClusterStats st = cur_st_;
            double lam = cur_lam_;
            std::size_t bad = cur_bad_;
            std::size_t ja = 0, add_a = 0;
            for (std::size_t t = 0; t < 2; ++t) {
                if (!(mask >> t & 1u)) continue;
                const std::size_t i = extra[t];
                key ^= keys_[i];
                st.add(shifted_[i]);
                lam += lambda_[i];
                if (q_) {
                    const std::size_t j = comp_[i];
                    const std::size_t before = cnt_[j] + (ja == j ? add_a : 0);
                    bad += is_bad(j, before + 1);
                    bad -= is_bad(j, before);
                    ja = j;
                    add_a = 1;
                }
            }
            if (st.weight <= 0.0) continue;
            score(key, st, lam, bad == 0, [&] {
                PointSet s = cur_;
                for (std::size_t t = 0; t < 2; ++t)
                    if (mask >> t & 1u) s.insert(extra[t]);
                return s;
            });
        }
    }

    PricingOutput finish() {
        PricingOutput out;
        out.sets_evaluated = seen_.size();
        std::vector<PricedColumn> all, compatible;
        for (auto* heap : {&all_, &compatible_}) {
            auto& dst = heap == &all_ ? all : compatible;
            for (auto& e : *heap) {
                Column c = Column::make(inst_, std::move(e.members));
                const double rc = reduced_cost(c, lambda_, sigma_);
                if (rc < -tol_) dst.push_back({std::move(c), rc});
            }
        }
        auto order = [](const PricedColumn& x, const PricedColumn& y) {
            if (x.reduced_cost != y.reduced_cost) return x.reduced_cost < y.reduced_cost;
            return x.column.members.lex_less(y.column.members);
        };
        std::sort(all.begin(), all.end(), order);
        std::sort(compatible.begin(), compatible.end(), order);
        if (!best_.empty()) {
            Column c = Column::make(inst_, best_);
            out.best_reduced_cost = reduced_cost(c, lambda_, sigma_);
            out.best_members = std::move(c.members);
        }
        if (!all.empty() && all.front().reduced_cost < out.best_reduced_cost) {
            out.best_reduced_cost = all.front().reduced_cost;
            out.best_members = all.front().column.members;
        }
        out.columns = std::move(all);
        out.compatible = std::move(compatible);
        return out;
    }

private:
    struct Entry {
        double rc;
        PointSet members;
    };
    // Heap order: the worst kept entry on top.
    static bool better(const Entry& x, const Entry& y) {
        if (x.rc != y.rc) return x.rc < y.rc;
        return x.members.lex_less(y.members);
    }

    bool is_bad(std::size_t j, std::size_t c) const { return c > 0 && c < comp_size_[j]; }

    template <class Materialize>
    void score(const SetKey& key, const ClusterStats& st, double lam, bool compatible, Materialize&& materialize) {
        if (!seen_.insert(key).second) return;
        const double rc = st.cost() + sigma_ - lam;
        if (rc < best_rc_) {
            best_rc_ = rc;
            best_ = materialize();
        }
        if (!(rc < -tol_) || max_columns_ == 0) return;
        offer(all_, rc, materialize);
        if (compatible) offer(compatible_, rc, materialize);
    }

    template <class Materialize>
    void offer(std::vector<Entry>& heap, double rc, Materialize& materialize) {
        if (heap.size() < max_columns_) {
            heap.push_back({rc, materialize()});
            std::push_heap(heap.begin(), heap.end(), better);
            return;
        }
        if (rc > heap.front().rc) return;
        Entry e{rc, materialize()};
        if (!better(e, heap.front())) return;
        std::pop_heap(heap.begin(), heap.end(), better);
        heap.back() = std::move(e);
        std::push_heap(heap.begin(), heap.end(), better);
    }

    const Instance& inst_;
    std::span<const double> lambda_;
    double sigma_;
    double tol_;
    const AggregationPartition* q_;
    std::size_t max_columns_;
    std::vector<Point> shifted_;
    std::vector<SetKey> keys_;
    std::vector<std::size_t> comp_, comp_size_, cnt_, scratch_;
    std::unordered_set<SetKey, SetKeyHash> seen_;
    std::vector<Entry> all_, compatible_;
    PointSet best_;
    double best_rc_ = std::numeric_limits<double>::infinity();

    PointSet cur_;
    SetKey cur_key_;
    ClusterStats cur_st_;
    double cur_lam_ = 0.0;
    std::size_t cur_bad_ = 0;
};

}  // namespace detail

using detail::ColumnCollector;

}  // namespace mssc
