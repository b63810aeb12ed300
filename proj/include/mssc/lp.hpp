#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mssc::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { Greater, Less, Equal };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status s);

struct Entry {
    std::size_t index;  // row index for a column entry, column index for a row entry
    double value;
};

struct ColumnSpec {
    double cost = 0.0;
    double lower = 0.0;
    double upper = kInf;
    std::vector<Entry> entries;  // (row, coefficient)
    std::string name;
};

struct RowSpec {
    RowSense sense = RowSense::Greater;
    double rhs = 0.0;
    std::vector<Entry> entries;  // (column, coefficient)
    std::string name;
};

// Minimization LP in column-major sparse form.
class LinearProgram {
public:
    std::size_t add_row(RowSense sense, double rhs, std::string name = {});
    std::size_t add_column(const ColumnSpec& col);

    std::size_t num_rows() const noexcept { return sense_.size(); }
    std::size_t num_cols() const noexcept { return cost_.size(); }

    RowSense sense(std::size_t r) const { return sense_[r]; }
    double rhs(std::size_t r) const { return rhs_[r]; }
    double cost(std::size_t c) const { return cost_[c]; }
    double lower(std::size_t c) const { return lower_[c]; }
    double upper(std::size_t c) const { return upper_[c]; }
    const std::vector<Entry>& column(std::size_t c) const { return cols_[c]; }
    const std::string& row_name(std::size_t r) const { return row_names_[r]; }
    const std::string& col_name(std::size_t c) const { return col_names_[c]; }

    void set_cost(std::size_t c, double v) { cost_[c] = v; }
    void set_bounds(std::size_t c, double lo, double up) {
        lower_[c] = lo;
        upper_[c] = up;
    }
    void set_rhs(std::size_t r, double v) { rhs_[r] = v; }

    // Append a coefficient to an existing row/column pair; the pair must be new.
    void add_entry(std::size_t row, std::size_t col, double value);

    // Throws Error(InvalidArgument) on non-finite data or inconsistent bounds.
    void validate() const;

private:
    friend void add_rows(LinearProgram&, std::span<const RowSpec>);
    std::vector<RowSense> sense_;
    std::vector<double> rhs_;
    std::vector<std::string> row_names_;
    std::vector<double> cost_, lower_, upper_;
    std::vector<std::vector<Entry>> cols_;
    std::vector<std::string> col_names_;
};

// Both throw Error(DimensionMismatch) when an entry references a missing row/column.
void add_columns(LinearProgram& lp, std::span<const ColumnSpec> cols);
void add_rows(LinearProgram& lp, std::span<const RowSpec> rows);

enum class VarStatus : unsigned char { Basic, AtLower, AtUpper, AtZero };

// Basis snapshot; a basis taken from a smaller LP is extended on reuse (new
// columns nonbasic at a bound, new rows with a basic slack).
struct Basis {
    std::vector<VarStatus> cols;
    std::vector<VarStatus> rows;  // status of each row's slack

    bool empty() const noexcept { return cols.empty() && rows.empty(); }
};

struct LpSolution {
    Status status = Status::IterationLimit;
    double objective = 0.0;
    std::vector<double> primal;
    // Row duals y with reduced cost d = c - A'y. For a minimization, >= rows
    // have y >= 0 and <= rows have y <= 0.
    std::vector<double> duals;
    std::vector<double> reduced_costs;
    Basis basis;
    std::size_t iterations = 0;
    std::size_t degenerate_pivots = 0;
    bool used_bland = false;
};

struct SolveOptions {
    std::size_t max_iterations = 1000000;
    std::size_t refactor_interval = 100;
    // Bland's rule is switched on after this many consecutive degenerate
    // pivots; 0 means 10 * (rows + cols).
    std::size_t bland_threshold = 0;
    bool force_bland = false;
};

// Bounded primal simplex (phase 1 minimizes the sum of infeasibilities, so
// any warm basis is accepted). Throws Error(NumericalFailure) if the basis
// cannot be factorized or the result fails its own feasibility check; callers
// re-solve cold in that case.
LpSolution solve(const LinearProgram& lp, const Basis* warm = nullptr, const SolveOptions& options = {});

// CPLEX-LP text rendering for debugging dumps.
std::string to_cplex_lp(const LinearProgram& lp);

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;
    virtual LpSolution solve(const LinearProgram& lp, const Basis* warm) = 0;
};

class BundledSimplex final : public Backend {
public:
    explicit BundledSimplex(SolveOptions options = {}) : options_(options) {}
    std::string name() const override { return "bundled"; }
    LpSolution solve(const LinearProgram& lp, const Basis* warm) override;

private:
    SolveOptions options_;
};

// Runs an external command over a JSON file exchange:
//   <command> <input.json> <output.json>
// Input carries the LP; output carries status, objective, primal, duals.
class ExternalProcessBackend final : public Backend {
public:
    explicit ExternalProcessBackend(std::string command) : command_(std::move(command)) {}
    std::string name() const override { return "external"; }
    LpSolution solve(const LinearProgram& lp, const Basis* warm) override;

private:
    std::string command_;
};

// "bundled" or "external". The external command comes from the argument or,
// when empty, from the MSSC_LP_ADAPTER environment variable.
std::unique_ptr<Backend> make_backend(const std::string& selector, const std::string& external_command = {});

}  // namespace mssc::lp
