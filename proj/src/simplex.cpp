#include <algorithm>
#include <cmath>
#include <sstream>

#include "mssc/error.hpp"
#include "mssc/lp.hpp"

namespace mssc::lp {

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "Optimal";
        case Status::Infeasible: return "Infeasible";
        case Status::Unbounded: return "Unbounded";
        case Status::IterationLimit: return "IterationLimit";
    }
    return "Unknown";
}

std::size_t LinearProgram::add_row(RowSense sense, double rhs, std::string name) {
    sense_.push_back(sense);
    rhs_.push_back(rhs);
    row_names_.push_back(name.empty() ? "r" + std::to_string(sense_.size() - 1) : std::move(name));
    return sense_.size() - 1;
}

std::size_t LinearProgram::add_column(const ColumnSpec& col) {
    for (const auto& e : col.entries)
        if (e.index >= num_rows())
            throw Error(ErrorCode::DimensionMismatch, "column entry references row " + std::to_string(e.index));
    cost_.push_back(col.cost);
    lower_.push_back(col.lower);
    upper_.push_back(col.upper);
    cols_.push_back(col.entries);
    col_names_.push_back(col.name.empty() ? "x" + std::to_string(cost_.size() - 1) : col.name);
    return cost_.size() - 1;
}

void LinearProgram::add_entry(std::size_t row, std::size_t col, double value) {
    if (row >= num_rows() || col >= num_cols()) throw Error(ErrorCode::DimensionMismatch, "entry out of range");
    cols_[col].push_back({row, value});
}

void LinearProgram::validate() const {
    for (std::size_t r = 0; r < num_rows(); ++r)
        if (!std::isfinite(rhs_[r])) throw Error(ErrorCode::InvalidArgument, "non-finite rhs");
    for (std::size_t c = 0; c < num_cols(); ++c) {
        if (!std::isfinite(cost_[c])) throw Error(ErrorCode::InvalidArgument, "non-finite cost");
        if (std::isnan(lower_[c]) || std::isnan(upper_[c]) || lower_[c] > upper_[c] || lower_[c] == kInf ||
            upper_[c] == -kInf)
            throw Error(ErrorCode::InvalidArgument, "inconsistent bounds on column " + std::to_string(c));
        for (const auto& e : cols_[c]) {
            if (e.index >= num_rows()) throw Error(ErrorCode::DimensionMismatch, "entry out of range");
            if (!std::isfinite(e.value)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
        }
    }
}

void add_columns(LinearProgram& lp, std::span<const ColumnSpec> cols) {
    for (const auto& c : cols)
        for (const auto& e : c.entries)
            if (e.index >= lp.num_rows())
                throw Error(ErrorCode::DimensionMismatch, "column entry references row " + std::to_string(e.index));
    for (const auto& c : cols) lp.add_column(c);
}

void add_rows(LinearProgram& lp, std::span<const RowSpec> rows) {
    for (const auto& r : rows)
        for (const auto& e : r.entries)
            if (e.index >= lp.num_cols())
                throw Error(ErrorCode::DimensionMismatch, "row entry references column " + std::to_string(e.index));
    for (const auto& r : rows) {
        const auto idx = lp.add_row(r.sense, r.rhs, r.name);
        for (const auto& e : r.entries) lp.cols_[e.index].push_back({idx, e.value});
    }
}

namespace {

class Simplex {
public:
    Simplex(const LinearProgram& lp, const SolveOptions& opt) : lp_(lp), opt_(opt), m_(lp.num_rows()), n_(lp.num_cols()) {
        const std::size_t total = n_ + m_;
        lo_.resize(total);
        up_.resize(total);
        cost_.assign(total, 0.0);
        double cmax = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            lo_[j] = lp.lower(j);
            up_[j] = lp.upper(j);
            cost_[j] = lp.cost(j);
            cmax = std::max(cmax, std::abs(cost_[j]));
        }
        for (std::size_t i = 0; i < m_; ++i) {
            switch (lp.sense(i)) {
                case RowSense::Greater: lo_[n_ + i] = -kInf; up_[n_ + i] = 0.0; break;
                case RowSense::Less: lo_[n_ + i] = 0.0; up_[n_ + i] = kInf; break;
                case RowSense::Equal: lo_[n_ + i] = 0.0; up_[n_ + i] = 0.0; break;
            }
        }
        dtol_ = std::max(1e-9, 1e-12 * cmax);
        status_.assign(total, VarStatus::AtLower);
        x_.assign(total, 0.0);
        pos_.assign(total, -1);
        head_.assign(m_, 0);
        bland_threshold_ = opt.bland_threshold ? opt.bland_threshold : 10 * (m_ + n_);
    }

    LpSolution run(const Basis* warm) {
        if (!(warm && load_basis(*warm))) slack_basis();
        factor_with_repair();
        compute_xb();

        LpSolution sol;
        bool bland = opt_.force_bland;
        std::size_t consecutive_degenerate = 0;
        std::vector<double> cb(m_), y(m_), alpha(m_);
        int final_checks = 0;

        while (true) {
            if (iterations_ >= opt_.max_iterations) {
                sol.status = Status::IterationLimit;
                break;
            }
            if (etas_.size() >= opt_.refactor_interval) {
                factor_with_repair();
                compute_xb();
            }

            const bool phase1 = basic_cost(cb);
            btran(cb, y);

            // Pricing.
            std::size_t enter = npos;
            double best = 0.0;
            double d_enter = 0.0;
            for (std::size_t j = 0; j < n_ + m_; ++j) {
                if (status_[j] == VarStatus::Basic) continue;
                if (lo_[j] == up_[j]) continue;
                const double c = phase1 ? 0.0 : cost_[j];
                const double d = c - dot_column(j, y);
                bool eligible = false;
                switch (status_[j]) {
                    case VarStatus::AtLower: eligible = d < -dtol_; break;
                    case VarStatus::AtUpper: eligible = d > dtol_; break;
                    case VarStatus::AtZero: eligible = std::abs(d) > dtol_; break;
                    case VarStatus::Basic: break;
                }
                if (!eligible) continue;
                if (bland) {
                    enter = j;
                    d_enter = d;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    enter = j;
                    d_enter = d;
                }
            }

            if (enter == npos) {
                // No improving column: verify on a fresh factorization before
                // declaring the outcome.
                if (!etas_.empty() && final_checks < 3) {
                    ++final_checks;
                    factor_with_repair();
                    compute_xb();
                    continue;
                }
                if (phase1) {
                    sol.status = Status::Infeasible;
                } else {
                    sol.status = Status::Optimal;
                }
                break;
            }

            ftran_column(enter, alpha);
            const double dir = d_enter < 0.0 ? 1.0 : -1.0;

            // Ratio test.
            const RatioResult rr = ratio_test(alpha, dir, enter, bland);
            if (rr.unbounded) {
                if (phase1) {
                    // Numerical trouble; refactor and retry.
                    factor_with_repair();
                    compute_xb();
                    if (++numeric_retries_ > 5) throw Error(ErrorCode::NumericalFailure, "phase 1 lost a breakpoint");
                    continue;
                }
                if (!etas_.empty()) {
                    // Confirm on a fresh factorization: a drifted update can
                    // hide the blocking rows.
                    factor_with_repair();
                    compute_xb();
                    continue;
                }
                sol.status = Status::Unbounded;
                break;
            }
            ++iterations_;
            const double theta = rr.theta;
            if (theta <= 1e-12) {
                ++degenerate_;
                if (++consecutive_degenerate > bland_threshold_) bland = true;
            } else {
                consecutive_degenerate = 0;
            }

            x_[enter] += dir * theta;
            for (std::size_t r = 0; r < m_; ++r)
                if (alpha[r] != 0.0) x_[head_[r]] -= dir * theta * alpha[r];

            if (rr.flip) {
                status_[enter] = (dir > 0) ? VarStatus::AtUpper : VarStatus::AtLower;
                x_[enter] = (dir > 0) ? up_[enter] : lo_[enter];
                continue;
            }

            const std::size_t r = rr.pos;
            const std::size_t leave = head_[r];
            status_[leave] = rr.leave_at_upper ? VarStatus::AtUpper : VarStatus::AtLower;
            x_[leave] = rr.leave_at_upper ? up_[leave] : lo_[leave];
            pos_[leave] = -1;
            head_[r] = enter;
            pos_[enter] = static_cast<long>(r);
            status_[enter] = VarStatus::Basic;
            push_eta(r, alpha);
            final_checks = 0;
        }

        sol.iterations = iterations_;
        sol.degenerate_pivots = degenerate_;
        sol.used_bland = bland;
        if (sol.status == Status::Optimal) {
            factor_with_repair();
            compute_xb();
            if (max_infeasibility() > 1e-6) throw Error(ErrorCode::NumericalFailure, "final basis infeasible");
            for (std::size_t r = 0; r < m_; ++r) cb[r] = cost_[head_[r]];
            btran(cb, y);
        }
        sol.primal.assign(x_.begin(), x_.begin() + static_cast<long>(n_));
        sol.duals = y;
        sol.reduced_costs.resize(n_);
        double obj = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            sol.reduced_costs[j] = cost_[j] - dot_column(j, y);
            obj += cost_[j] * x_[j];
        }
        sol.objective = obj;
        sol.basis.cols.assign(status_.begin(), status_.begin() + static_cast<long>(n_));
        sol.basis.rows.assign(status_.begin() + static_cast<long>(n_), status_.end());
        return sol;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    static constexpr double kFeasTol = 1e-9;
    static constexpr double kPivotTol = 1e-9;

    struct Eta {
        std::size_t pos;
        double pivot;
        std::vector<std::pair<std::size_t, double>> others;
    };

    struct RatioResult {
        bool unbounded = false;
        bool flip = false;
        bool leave_at_upper = false;
        std::size_t pos = 0;
        double theta = 0.0;
    };

    double dot_column(std::size_t j, const std::vector<double>& y) const {
        if (j >= n_) return y[j - n_];
        double s = 0.0;
        for (const auto& e : lp_.column(j)) s += e.value * y[e.index];
        return s;
    }

    void nonbasic_default(std::size_t j) {
        if (std::isfinite(lo_[j])) {
            status_[j] = VarStatus::AtLower;
            x_[j] = lo_[j];
        } else if (std::isfinite(up_[j])) {
            status_[j] = VarStatus::AtUpper;
            x_[j] = up_[j];
        } else {
            status_[j] = VarStatus::AtZero;
            x_[j] = 0.0;
        }
    }

    void slack_basis() {
        for (std::size_t j = 0; j < n_; ++j) {
            nonbasic_default(j);
            pos_[j] = -1;
        }
        for (std::size_t i = 0; i < m_; ++i) {
            status_[n_ + i] = VarStatus::Basic;
            head_[i] = n_ + i;
            pos_[n_ + i] = static_cast<long>(i);
        }
    }

    bool load_basis(const Basis& b) {
        if (b.cols.size() > n_ || b.rows.size() > m_) return false;
        std::size_t basics = 0;
        std::vector<std::size_t> heads;
        heads.reserve(m_);
        auto apply = [&](std::size_t j, VarStatus s) {
            if (s == VarStatus::Basic) {
                heads.push_back(j);
                ++basics;
                status_[j] = VarStatus::Basic;
                return;
            }
            status_[j] = s;
            if (s == VarStatus::AtLower && std::isfinite(lo_[j])) x_[j] = lo_[j];
            else if (s == VarStatus::AtUpper && std::isfinite(up_[j])) x_[j] = up_[j];
            else nonbasic_default(j);
        };
        for (std::size_t j = 0; j < n_; ++j) {
            if (j < b.cols.size()) apply(j, b.cols[j]);
            else nonbasic_default(j);
        }
        for (std::size_t i = 0; i < m_; ++i) apply(n_ + i, i < b.rows.size() ? b.rows[i] : VarStatus::Basic);
        if (basics != m_) {
            std::fill(status_.begin(), status_.end(), VarStatus::AtLower);
            return false;
        }
        std::fill(pos_.begin(), pos_.end(), -1);
        for (std::size_t r = 0; r < m_; ++r) {
            head_[r] = heads[r];
            pos_[heads[r]] = static_cast<long>(r);
        }
        return true;
    }

    // Dense LU of the basis with partial pivoting; dependent columns are
    // swapped for slacks of uncovered rows and the factorization restarted.
    void factor_with_repair() {
        for (int attempt = 0; attempt <= static_cast<int>(m_) + 1; ++attempt) {
            const long bad = factor();
            if (bad < 0) {
                etas_.clear();
                return;
            }
            // Pick a remaining row whose slack is not basic.
            std::size_t row = npos;
            for (std::size_t k = static_cast<std::size_t>(bad); k < m_; ++k) {
                const std::size_t cand = perm_[k];
                if (status_[n_ + cand] != VarStatus::Basic) {
                    row = cand;
                    break;
                }
            }
            if (row == npos) break;
            const std::size_t old = head_[static_cast<std::size_t>(bad)];
            nonbasic_default(old);
            pos_[old] = -1;
            head_[static_cast<std::size_t>(bad)] = n_ + row;
            status_[n_ + row] = VarStatus::Basic;
            pos_[n_ + row] = bad;
        }
        throw Error(ErrorCode::NumericalFailure, "basis repair failed");
    }

    // Returns -1 on success, else the basis position of the first dependent column.
    long factor() {
        lu_.assign(m_ * m_, 0.0);
        for (std::size_t p = 0; p < m_; ++p) {
            const std::size_t j = head_[p];
            if (j >= n_) {
                lu_[(j - n_) * m_ + p] = 1.0;
            } else {
                for (const auto& e : lp_.column(j)) lu_[e.index * m_ + p] += e.value;
            }
        }
        perm_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) perm_[i] = i;
        for (std::size_t k = 0; k < m_; ++k) {
            std::size_t piv = k;
            double big = std::abs(lu_[k * m_ + k]);
            for (std::size_t i = k + 1; i < m_; ++i) {
                const double v = std::abs(lu_[i * m_ + k]);
                if (v > big) {
                    big = v;
                    piv = i;
                }
            }
            if (big < 1e-11) return static_cast<long>(k);
            if (piv != k) {
                std::swap_ranges(lu_.begin() + static_cast<long>(k * m_), lu_.begin() + static_cast<long>((k + 1) * m_),
                                 lu_.begin() + static_cast<long>(piv * m_));
                std::swap(perm_[k], perm_[piv]);
            }
            const double pv = lu_[k * m_ + k];
            double* rowk = &lu_[k * m_];
            for (std::size_t i = k + 1; i < m_; ++i) {
                double* rowi = &lu_[i * m_];
                if (rowi[k] == 0.0) continue;
                const double f = rowi[k] / pv;
                rowi[k] = f;
                for (std::size_t c = k + 1; c < m_; ++c) rowi[c] -= f * rowk[c];
            }
        }
        return -1;
    }

    // In-place B0^{-1} v where v is indexed by row; result indexed by position.
    void lu_solve(std::vector<double>& v) const {
        std::vector<double> z(m_);
        for (std::size_t k = 0; k < m_; ++k) z[k] = v[perm_[k]];
        for (std::size_t i = 0; i < m_; ++i) {
            const double* row = &lu_[i * m_];
            double s = z[i];
            for (std::size_t c = 0; c < i; ++c) s -= row[c] * z[c];
            z[i] = s;
        }
        for (std::size_t i = m_; i-- > 0;) {
            const double* row = &lu_[i * m_];
            double s = z[i];
            for (std::size_t c = i + 1; c < m_; ++c) s -= row[c] * z[c];
            z[i] = s / row[i];
        }
        v.swap(z);
    }

    // Solves y' B0 = c' ; c indexed by position, y by row.
    void lu_solve_transposed(std::vector<double>& c) const {
        std::vector<double> w(c);
        // U' w = c (forward).
        for (std::size_t i = 0; i < m_; ++i) {
            double s = w[i];
            for (std::size_t r = 0; r < i; ++r) s -= lu_[r * m_ + i] * w[r];
            w[i] = s / lu_[i * m_ + i];
        }
        // L' v = w (backward, unit diagonal).
        for (std::size_t i = m_; i-- > 0;) {
            double s = w[i];
            for (std::size_t r = i + 1; r < m_; ++r) s -= lu_[r * m_ + i] * w[r];
            w[i] = s;
        }
        for (std::size_t k = 0; k < m_; ++k) c[perm_[k]] = w[k];
    }

    void ftran(std::vector<double>& v) const {
        lu_solve(v);
        for (const auto& eta : etas_) {
            const double vr = v[eta.pos] / eta.pivot;
            v[eta.pos] = vr;
            if (vr == 0.0) continue;
            for (const auto& [i, d] : eta.others) v[i] -= d * vr;
        }
    }

    void ftran_column(std::size_t j, std::vector<double>& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        if (j >= n_) {
            out[j - n_] = 1.0;
        } else {
            for (const auto& e : lp_.column(j)) out[e.index] += e.value;
        }
        ftran(out);
        for (auto& v : out)
            if (std::abs(v) < 1e-13) v = 0.0;
    }

    void btran(const std::vector<double>& cb, std::vector<double>& y) const {
        std::vector<double> w(cb);
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double s = w[it->pos];
            for (const auto& [i, d] : it->others) s -= w[i] * d;
            w[it->pos] = s / it->pivot;
        }
        lu_solve_transposed(w);
        y.swap(w);
    }

    void push_eta(std::size_t r, const std::vector<double>& alpha) {
        Eta eta;
        eta.pos = r;
        eta.pivot = alpha[r];
        for (std::size_t i = 0; i < m_; ++i)
            if (i != r && alpha[i] != 0.0) eta.others.emplace_back(i, alpha[i]);
        etas_.push_back(std::move(eta));
    }

    void compute_xb() {
        std::vector<double> rhs(m_);
        for (std::size_t i = 0; i < m_; ++i) rhs[i] = lp_.rhs(i);
        for (std::size_t j = 0; j < n_ + m_; ++j) {
            if (status_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
            if (j >= n_) {
                rhs[j - n_] -= x_[j];
            } else {
                for (const auto& e : lp_.column(j)) rhs[e.index] -= e.value * x_[j];
            }
        }
        ftran(rhs);
        for (std::size_t r = 0; r < m_; ++r) x_[head_[r]] = rhs[r];
    }

    // Fills basic costs for the current phase; returns true in phase 1.
    bool basic_cost(std::vector<double>& cb) const {
        bool infeasible = false;
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t j = head_[r];
            if (x_[j] < lo_[j] - kFeasTol) {
                cb[r] = -1.0;
                infeasible = true;
            } else if (x_[j] > up_[j] + kFeasTol) {
                cb[r] = 1.0;
                infeasible = true;
            } else {
                cb[r] = 0.0;
            }
        }
        if (!infeasible)
            for (std::size_t r = 0; r < m_; ++r) cb[r] = cost_[head_[r]];
        return infeasible;
    }

    double max_infeasibility() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < m_; ++r) {
            const std::size_t j = head_[r];
            worst = std::max({worst, lo_[j] - x_[j], x_[j] - up_[j]});
        }
        return worst;
    }

    RatioResult ratio_test(const std::vector<double>& alpha, double dir, std::size_t enter,
                           bool bland) const {
        RatioResult res;
        const double range = up_[enter] - lo_[enter];

        struct Cand {
            std::size_t pos;
            double exact;
            double relaxed;
            bool at_upper;
        };
        std::vector<Cand> cands;
        for (std::size_t r = 0; r < m_; ++r) {
            const double a = alpha[r];
            if (std::abs(a) < kPivotTol) continue;
            const double rate = -dir * a;  // change of the basic value per unit step
            const std::size_t j = head_[r];
            const double xv = x_[j];
            if (rate < 0.0) {
                if (xv > up_[j] + kFeasTol) {
                    // Phase 1: infeasible above and moving down; leaves at upper.
                    const double t = (xv - up_[j]) / -rate;
                    cands.push_back({r, t, t, true});
                } else if (xv >= lo_[j] - kFeasTol && std::isfinite(lo_[j])) {
                    const double gap = std::max(xv - lo_[j], 0.0);
                    cands.push_back({r, gap / -rate, (gap + kFeasTol) / -rate, false});
                }
            } else {
                if (xv < lo_[j] - kFeasTol) {
                    const double t = (lo_[j] - xv) / rate;
                    cands.push_back({r, t, t, false});
                } else if (xv <= up_[j] + kFeasTol && std::isfinite(up_[j])) {
                    const double gap = std::max(up_[j] - xv, 0.0);
                    cands.push_back({r, gap / rate, (gap + kFeasTol) / rate, true});
                }
            }
        }

        if (cands.empty()) {
            if (std::isfinite(range)) {
                res.flip = true;
                res.theta = range;
                return res;
            }
            res.unbounded = true;
            return res;
        }

        if (bland) {
            double best = kInf;
            std::size_t best_var = npos;
            const Cand* chosen = nullptr;
            for (const auto& c : cands) {
                const std::size_t var = head_[c.pos];
                if (c.exact < best - 1e-12 || (std::abs(c.exact - best) <= 1e-12 && var < best_var)) {
                    best = c.exact;
                    best_var = var;
                    chosen = &c;
                }
            }
            if (std::isfinite(range) && range <= best) {
                res.flip = true;
                res.theta = range;
                return res;
            }
            res.pos = chosen->pos;
            res.theta = std::max(chosen->exact, 0.0);
            res.leave_at_upper = chosen->at_upper;
            return res;
        }

        double theta_max = kInf;
        for (const auto& c : cands) theta_max = std::min(theta_max, c.relaxed);
        if (std::isfinite(range) && range <= theta_max) {
            res.flip = true;
            res.theta = range;
            return res;
        }
        const Cand* chosen = nullptr;
        double best_pivot = -1.0;
        for (const auto& c : cands) {
            if (c.exact <= theta_max) {
                const double piv = std::abs(alpha[c.pos]);
                if (piv > best_pivot) {
                    best_pivot = piv;
                    chosen = &c;
                }
            }
        }
        res.pos = chosen->pos;
        res.theta = std::max(chosen->exact, 0.0);
        res.leave_at_upper = chosen->at_upper;
        return res;
    }

    const LinearProgram& lp_;
    SolveOptions opt_;
    std::size_t m_, n_;
    std::vector<double> lo_, up_, cost_, x_;
    std::vector<VarStatus> status_;
    std::vector<long> pos_;
    std::vector<std::size_t> head_;
    std::vector<double> lu_;
    std::vector<std::size_t> perm_;
    std::vector<Eta> etas_;
    double dtol_ = 1e-9;
    std::size_t iterations_ = 0;
    std::size_t degenerate_ = 0;
    std::size_t bland_threshold_ = 0;
    int numeric_retries_ = 0;
};

}  // namespace

LpSolution solve(const LinearProgram& lp, const Basis* warm, const SolveOptions& options) {
    lp.validate();
    if (lp.num_rows() == 0) {
        // Bound-constrained only: each variable sits at its cheapest bound.
        LpSolution sol;
        sol.status = Status::Optimal;
        sol.primal.resize(lp.num_cols());
        sol.reduced_costs.resize(lp.num_cols());
        sol.basis.cols.resize(lp.num_cols());
        for (std::size_t j = 0; j < lp.num_cols(); ++j) {
            const double c = lp.cost(j);
            double v;
            if (c > 0) v = lp.lower(j);
            else if (c < 0) v = lp.upper(j);
            else v = std::isfinite(lp.lower(j)) ? lp.lower(j) : (std::isfinite(lp.upper(j)) ? lp.upper(j) : 0.0);
            if (!std::isfinite(v)) {
                sol.status = Status::Unbounded;
                v = 0.0;
            }
            sol.primal[j] = v;
            sol.reduced_costs[j] = c;
            sol.objective += c * v;
            sol.basis.cols[j] = (v == lp.upper(j) && v != lp.lower(j)) ? VarStatus::AtUpper : VarStatus::AtLower;
        }
        return sol;
    }
    Simplex s(lp, options);
    return s.run(warm);
}

LpSolution BundledSimplex::solve(const LinearProgram& lp, const Basis* warm) {
    try {
        return lp::solve(lp, warm, options_);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NumericalFailure || warm == nullptr) throw;
        return lp::solve(lp, nullptr, options_);
    }
}

std::string to_cplex_lp(const LinearProgram& lp) {
    std::ostringstream os;
    os.precision(17);
    auto term = [&](double v, const std::string& name, bool first) {
        if (v < 0) os << (first ? "- " : " - ") << -v << ' ' << name;
        else os << (first ? "" : " + ") << v << ' ' << name;
    };
    os << "Minimize\n obj:";
    bool first = true;
    for (std::size_t j = 0; j < lp.num_cols(); ++j) {
        if (lp.cost(j) == 0.0) continue;
        os << ' ';
        term(lp.cost(j), lp.col_name(j), first);
        first = false;
    }
    if (first) os << " 0 " << (lp.num_cols() ? lp.col_name(0) : "x");
    os << "\nSubject To\n";
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(lp.num_rows());
    for (std::size_t j = 0; j < lp.num_cols(); ++j)
        for (const auto& e : lp.column(j)) rows[e.index].emplace_back(j, e.value);
    for (std::size_t r = 0; r < lp.num_rows(); ++r) {
        os << ' ' << lp.row_name(r) << ':';
        bool f = true;
        for (const auto& [j, v] : rows[r]) {
            os << ' ';
            term(v, lp.col_name(j), f);
            f = false;
        }
        if (f) os << " 0 " << (lp.num_cols() ? lp.col_name(0) : "x");
        switch (lp.sense(r)) {
            case RowSense::Greater: os << " >= "; break;
            case RowSense::Less: os << " <= "; break;
            case RowSense::Equal: os << " = "; break;
        }
        os << lp.rhs(r) << '\n';
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < lp.num_cols(); ++j) {
        const double lo = lp.lower(j), up = lp.upper(j);
        if (lo == 0.0 && up == kInf) continue;
        if (lo == -kInf && up == kInf) {
            os << ' ' << lp.col_name(j) << " free\n";
            continue;
        }
        os << ' ';
        if (lo == -kInf) os << "-inf";
        else os << lo;
        os << " <= " << lp.col_name(j) << " <= ";
        if (up == kInf) os << "+inf";
        else os << up;
        os << '\n';
    }
    os << "End\n";
    return os.str();
}

}  // namespace mssc::lp
