#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "optcast/linalg.hpp"
#include "optcast/market_data.hpp"

namespace optcast {

// One trading day on the solver's time axis. The axis spans [0, 2*kTau]:
// observed quotes sit at 0, 2/3 and 4/3 of a window's span and the forecast
// day at the far end (see fit_boundary_curves).
inline constexpr double kTau = 1.0;

// p(t) = c0 + c1 t + c2 t^2
struct Quadratic {
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    double operator()(double t) const { return c0 + t * (c1 + t * c2); }
};

struct QrmConfig {
    double beta = 0.01;
    int nx = 21;
    int nt = 21;
    double cg_tol = 1e-10;
    int cg_max_iter = 10000;
};

// Backward Black-Scholes problem for one window, nondimensionalized onto
// the unit square in space and [0, 2*kTau] in time. Space x = 0 carries the
// option bid curve, x = 1 the ask curve; the risk-free rate is zero, so the
// operator is P u = u_t + (sigma^2 / 2) x^2 u_xx.
struct QrmProblem {
    Quadratic bid_curve;   // Dirichlet data at x = 0
    Quadratic ask_curve;   // Dirichlet data at x = 1
    double sigma = 0.0;    // constant over the window
    double f_x = 0.0;      // stock ask/bid ratio - 1
    double f_o = 0.0;      // option ask/bid ratio - 1
    double tau = kTau;
    int nx = 21;
    int nt = 21;
    double beta = 0.01;

    double hx() const { return 1.0 / (nx - 1); }
    double ht() const { return 2.0 * tau / (nt - 1); }
    double x_at(int i) const { return i * hx(); }
    double t_at(int j) const { return j * ht(); }

    // Linear-in-x background between the boundary curves. Its j = 0 slice
    // is the initial condition; the regularizer pulls the solution toward
    // it everywhere else.
    double background(int i, int j) const {
        const double x = x_at(i);
        const double t = t_at(j);
        return (1.0 - x) * bid_curve(t) + x * ask_curve(t);
    }

    // Checks beta > 0, grid >= 3x3, and bid < ask at every grid time.
    void validate() const;
};

// Dense values on the problem grid; u[i][j] with i indexing space.
struct GridFunction {
    int nx = 0;
    int nt = 0;
    std::vector<double> data;  // nx * nt, index i * nt + j

    GridFunction() = default;
    GridFunction(int nx_, int nt_) : nx(nx_), nt(nt_), data(static_cast<std::size_t>(nx_) * nt_, 0.0) {}

    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * nt + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * nt + j]; }
};

// The assembled convex quadratic J(w) = w^T A w - 2 b^T w + c over the
// unknown nodes (interior columns, all time levels past the initial one),
// written in terms of w = u - background. A is SPD for beta > 0.
class QuadraticForm {
public:
    QuadraticForm(const QrmProblem& problem);

    std::size_t n_unknowns() const { return matrix_.size(); }
    const SymBandMatrix& matrix() const { return matrix_; }
    std::span<const double> rhs() const { return rhs_; }
    double constant() const { return constant_; }

    // J evaluated through the assembled quadratic.
    double value(std::span<const double> w) const;

    // Grid <-> unknown-vector embedding. Fixed nodes take their Dirichlet /
    // initial values, i.e. w = 0 there.
    GridFunction to_grid(std::span<const double> w) const;
    std::vector<double> from_grid(const GridFunction& u) const;

    bool is_unknown(int i, int j) const { return i >= 1 && i <= problem_.nx - 2 && j >= 1; }
    std::size_t index_of(int i, int j) const {
        return static_cast<std::size_t>(j - 1) * (problem_.nx - 2) + (i - 1);
    }

    const QrmProblem& problem() const { return problem_; }

private:
    QrmProblem problem_;
    SymBandMatrix matrix_;
    std::vector<double> rhs_;
    double constant_ = 0.0;
};

struct QrmSolution {
    GridFunction u;
    double forecast = 0.0;
    double residual_norm = 0.0;  // discrete L2 norm of P_h u
    double objective = 0.0;      // J at the minimizer
};

// --- the five solve steps ---

// Dimensionless spread ratios from today's quotes.
std::pair<double, double> nondimensionalize(const OptionWindow& window);

// Unique quadratics through the three daily bid (resp. ask) values. Days
// t-2, t-1, t land at solver times 0, 2*tau/3, 4*tau/3 and the curve's
// value at 2*tau is the one-day-ahead extrapolation.
std::pair<Quadratic, Quadratic> fit_boundary_curves(const OptionWindow& window);

QuadraticForm assemble_functional(const QrmProblem& problem);

// Unique global minimizer of the form, as a full grid function. Uses the
// banded direct factorization below 2000 unknowns and preconditioned CG
// above, then polishes until the normal-equation relative residual is at
// most cfg.cg_tol. Throws on CG non-convergence (reporting the residual).
GridFunction minimize(const QuadraticForm& form, const QrmConfig& cfg);

// Spatial average of the final time level (one day past today).
double forecast_price(const GridFunction& u, const QrmProblem& problem);

QrmProblem make_problem(const OptionWindow& window, const QrmConfig& cfg);
QrmSolution solve_window(const OptionWindow& window, const QrmConfig& cfg);

// Direct evaluation of the functional and residual from grid values,
// independent of the assembled matrix (used for reporting and as a
// cross-check on the assembly).
double evaluate_objective(const QrmProblem& problem, const GridFunction& u);
double residual_norm(const QrmProblem& problem, const GridFunction& u);

// --- batch driver ---

struct WindowForecast {
    std::string option_id;
    Date date;                    // the window's "today"
    std::optional<QrmSolution> solution;
    std::string error;            // set when solution is absent
};

// Solves every window; windows are independent, so they are distributed
// over `jobs` threads. Output order matches input order regardless of jobs.
std::vector<WindowForecast> forecast_windows(const std::vector<OptionWindow>& windows,
                                             const QrmConfig& cfg, int jobs);

std::string forecasts_to_csv(const std::vector<WindowForecast>& rows);

}  // namespace optcast
