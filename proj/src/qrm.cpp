#include "optcast/qrm.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "optcast/text.hpp"

namespace optcast {

void QrmProblem::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("qrm: beta must be positive");
    if (nx < 3 || nt < 3) throw std::invalid_argument("qrm: grid must be at least 3x3");
    if (!(sigma >= 0.0)) throw std::invalid_argument("qrm: sigma must be nonnegative");
    for (int j = 0; j < nt; ++j) {
        const double t = t_at(j);
        if (!(bid_curve(t) < ask_curve(t)))
            throw std::invalid_argument("qrm: boundary curves cross at t = " + format_double(t));
    }
}

std::pair<double, double> nondimensionalize(const OptionWindow& window) {
    const OptionQuote& q = window.today();
    q.validate();
    return {q.stock_ask / q.stock_bid - 1.0, q.option_ask / q.option_bid - 1.0};
}

namespace {

// Quadratic through (t0, v0), (t1, v1), (t2, v2) by Lagrange elimination.
Quadratic quadratic_through(double t0, double v0, double t1, double v1, double t2, double v2) {
    const double d0 = (t0 - t1) * (t0 - t2);
    const double d1 = (t1 - t0) * (t1 - t2);
    const double d2 = (t2 - t0) * (t2 - t1);
    const double a0 = v0 / d0, a1 = v1 / d1, a2 = v2 / d2;
    Quadratic q;
    q.c2 = a0 + a1 + a2;
    q.c1 = -(a0 * (t1 + t2) + a1 * (t0 + t2) + a2 * (t0 + t1));
    q.c0 = a0 * t1 * t2 + a1 * t0 * t2 + a2 * t0 * t1;
    return q;
}

}  // namespace

std::pair<Quadratic, Quadratic> fit_boundary_curves(const OptionWindow& window) {
    // Observed days t-2, t-1, t at solver times 0, 2tau/3, 4tau/3; the
    // remaining third of the axis extrapolates one day past today.
    const double s0 = 0.0;
    const double s1 = 2.0 * kTau / 3.0;
    const double s2 = 4.0 * kTau / 3.0;
    const auto& q = window.quotes;
    Quadratic bid = quadratic_through(s0, q[0].option_bid, s1, q[1].option_bid, s2, q[2].option_bid);
    Quadratic ask = quadratic_through(s0, q[0].option_ask, s1, q[1].option_ask, s2, q[2].option_ask);
    return {bid, ask};
}

// ---------------------------------------------------------------------------
// Discretization. Unknowns are w = u - G on interior columns i = 1..nx-2 and
// time levels j = 1..nt-1; the initial level and both space boundaries are
// fixed (w = 0 there). The functional is a sum of squared affine terms in w:
//
//   residual   (P_h u)^2 * hx*ht            i interior, j = 0..nt-2
//   closeness  beta * w^2 * hx*ht           every unknown node
//   curvature  beta * (D2 w / h^2)^2 * hx*ht  second differences in x and t
//
// with P_h u = forward difference in t + (sigma^2/2) x^2 * central second
// difference in x, and P_h u = P_h w + P_h G evaluated numerically on G.
// ---------------------------------------------------------------------------

QuadraticForm::QuadraticForm(const QrmProblem& problem) : problem_(problem) {
    problem_.validate();
    const int nx = problem_.nx;
    const int nt = problem_.nt;
    const double hx = problem_.hx();
    const double ht = problem_.ht();
    const double area = hx * ht;
    const double beta = problem_.beta;

    const std::size_t n = static_cast<std::size_t>(nx - 2) * (nt - 1);
    const std::size_t hb = std::min(n > 0 ? n - 1 : 0, static_cast<std::size_t>(2 * (nx - 2)));
    matrix_ = SymBandMatrix(n, hb);
    rhs_.assign(n, 0.0);
    constant_ = 0.0;

    struct Entry {
        std::size_t index;
        double coef;
    };
    Entry entries[5];
    int n_entries = 0;
    double offset = 0.0;

    auto begin_term = [&] {
        n_entries = 0;
        offset = 0.0;
    };
    auto touch = [&](int i, int j, double coef) {
        // fixed nodes have w = 0 and drop out of the term
        if (is_unknown(i, j)) entries[n_entries++] = {index_of(i, j), coef};
    };
    auto commit = [&](double weight) {
        // accumulate weight * (sum coef*w + offset)^2
        for (int a = 0; a < n_entries; ++a) {
            const double wa = weight * entries[a].coef;
            for (int b = a; b < n_entries; ++b) {
                const std::size_t ra = entries[a].index;
                const std::size_t rb = entries[b].index;
                matrix_.add(std::min(ra, rb), std::max(ra, rb),
                            (ra == rb ? 1.0 : (ra < rb ? 1.0 : 1.0)) * wa * entries[b].coef);
            }
            rhs_[entries[a].index] -= wa * offset;
        }
        constant_ += weight * offset * offset;
    };

    auto background = [&](int i, int j) { return problem_.background(i, j); };

    // residual terms
    for (int i = 1; i <= nx - 2; ++i) {
        const double x = problem_.x_at(i);
        const double c = 0.5 * problem_.sigma * problem_.sigma * x * x / (hx * hx);
        for (int j = 0; j <= nt - 2; ++j) {
            begin_term();
            touch(i, j + 1, 1.0 / ht);
            touch(i, j, -1.0 / ht + c * -2.0);
            touch(i + 1, j, c);
            touch(i - 1, j, c);
            const double pg = (background(i, j + 1) - background(i, j)) / ht +
                              c * (background(i + 1, j) - 2.0 * background(i, j) + background(i - 1, j));
            offset = pg;
            commit(area);
        }
    }

    // closeness to the background
    for (int i = 1; i <= nx - 2; ++i)
        for (int j = 1; j <= nt - 1; ++j) {
            begin_term();
            touch(i, j, 1.0);
            commit(beta * area);
        }

    // curvature in x
    const double ax = 1.0 / (hx * hx);
    for (int i = 1; i <= nx - 2; ++i)
        for (int j = 1; j <= nt - 1; ++j) {
            begin_term();
            touch(i - 1, j, ax);
            touch(i, j, -2.0 * ax);
            touch(i + 1, j, ax);
            commit(beta * area);
        }

    // curvature in t
    const double at = 1.0 / (ht * ht);
    for (int i = 1; i <= nx - 2; ++i)
        for (int j = 1; j <= nt - 2; ++j) {
            begin_term();
            touch(i, j - 1, at);
            touch(i, j, -2.0 * at);
            touch(i, j + 1, at);
            commit(beta * area);
        }
}

double QuadraticForm::value(std::span<const double> w) const {
    std::vector<double> aw(w.size());
    matrix_.multiply(w, aw);
    return dot(w, aw) - 2.0 * dot(rhs_, w) + constant_;
}

GridFunction QuadraticForm::to_grid(std::span<const double> w) const {
    if (w.size() != n_unknowns()) throw std::invalid_argument("to_grid: size mismatch");
    GridFunction u(problem_.nx, problem_.nt);
    for (int i = 0; i < problem_.nx; ++i)
        for (int j = 0; j < problem_.nt; ++j)
            u.at(i, j) = problem_.background(i, j) + (is_unknown(i, j) ? w[index_of(i, j)] : 0.0);
    return u;
}

std::vector<double> QuadraticForm::from_grid(const GridFunction& u) const {
    if (u.nx != problem_.nx || u.nt != problem_.nt) throw std::invalid_argument("from_grid: size mismatch");
    std::vector<double> w(n_unknowns(), 0.0);
    for (int i = 1; i <= problem_.nx - 2; ++i)
        for (int j = 1; j <= problem_.nt - 1; ++j)
            w[index_of(i, j)] = u.at(i, j) - problem_.background(i, j);
    return w;
}

QuadraticForm assemble_functional(const QrmProblem& problem) { return QuadraticForm(problem); }

namespace {

constexpr std::size_t kDirectSolveLimit = 2000;

}  // namespace

GridFunction minimize(const QuadraticForm& form, const QrmConfig& cfg) {
    const std::size_t n = form.n_unknowns();
    const auto& a = form.matrix();
    const auto b = form.rhs();

    std::vector<double> w;
    if (n < kDirectSolveLimit) {
        w = cholesky_solve(a, b);
    } else {
        const auto cg = conjugate_gradient(a, b, cfg.cg_tol, static_cast<std::size_t>(cfg.cg_max_iter));
        if (!cg.converged)
            throw std::runtime_error("qrm: conjugate gradient did not converge; relative residual " +
                                     format_double(cg.relative_residual) + " after " +
                                     std::to_string(cg.iterations) + " iterations");
        w = std::move(cg.x);
    }

    // polish until the normal-equation residual meets the contract
    std::vector<double> r(n);
    const double bnorm = norm2(b);
    const double target = cfg.cg_tol * (bnorm > 0.0 ? bnorm : 1.0);
    for (int round = 0; round < 3; ++round) {
        a.multiply(w, r);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        if (norm2(r) <= target) break;
        const auto cg = conjugate_gradient(a, b, cfg.cg_tol, static_cast<std::size_t>(cfg.cg_max_iter), w);
        w = cg.x;
        if (!cg.converged)
            throw std::runtime_error("qrm: normal-equation polish stalled; relative residual " +
                                     format_double(cg.relative_residual));
    }
    return form.to_grid(w);
}

double forecast_price(const GridFunction& u, const QrmProblem& problem) {
    if (u.nx != problem.nx || u.nt != problem.nt)
        throw std::invalid_argument("forecast_price: grid mismatch");
    double sum = 0.0;
    for (int i = 0; i < u.nx; ++i) sum += u.at(i, u.nt - 1);
    return sum / u.nx;
}

double residual_norm(const QrmProblem& problem, const GridFunction& u) {
    const double hx = problem.hx();
    const double ht = problem.ht();
    double acc = 0.0;
    for (int i = 1; i <= problem.nx - 2; ++i) {
        const double x = problem.x_at(i);
        const double c = 0.5 * problem.sigma * problem.sigma * x * x / (hx * hx);
        for (int j = 0; j <= problem.nt - 2; ++j) {
            const double pu = (u.at(i, j + 1) - u.at(i, j)) / ht +
                              c * (u.at(i + 1, j) - 2.0 * u.at(i, j) + u.at(i - 1, j));
            acc += pu * pu;
        }
    }
    return std::sqrt(acc * hx * ht);
}

double evaluate_objective(const QrmProblem& problem, const GridFunction& u) {
    const double hx = problem.hx();
    const double ht = problem.ht();
    const double area = hx * ht;
    const double beta = problem.beta;

    const double rn = residual_norm(problem, u);
    double acc = rn * rn;

    // closeness (boundary and initial nodes carry w = 0 exactly)
    for (int i = 0; i < problem.nx; ++i)
        for (int j = 0; j < problem.nt; ++j) {
            const double w = u.at(i, j) - problem.background(i, j);
            acc += beta * w * w * area;
        }

    auto w_at = [&](int i, int j) { return u.at(i, j) - problem.background(i, j); };

    const double ax = 1.0 / (hx * hx);
    for (int i = 1; i <= problem.nx - 2; ++i)
        for (int j = 0; j <= problem.nt - 1; ++j) {
            const double d2 = (w_at(i - 1, j) - 2.0 * w_at(i, j) + w_at(i + 1, j)) * ax;
            acc += beta * d2 * d2 * area;
        }
    const double at = 1.0 / (ht * ht);
    for (int i = 1; i <= problem.nx - 2; ++i)
        for (int j = 1; j <= problem.nt - 2; ++j) {
            const double d2 = (w_at(i, j - 1) - 2.0 * w_at(i, j) + w_at(i, j + 1)) * at;
            acc += beta * d2 * d2 * area;
        }
    return acc;
}

QrmProblem make_problem(const OptionWindow& window, const QrmConfig& cfg) {
    for (const auto& q : window.quotes) q.validate();
    QrmProblem p;
    const auto [f_x, f_o] = nondimensionalize(window);
    p.f_x = f_x;
    p.f_o = f_o;
    std::tie(p.bid_curve, p.ask_curve) = fit_boundary_curves(window);
    p.sigma = window.today().implied_vol;
    p.nx = cfg.nx;
    p.nt = cfg.nt;
    p.beta = cfg.beta;
    p.validate();
    return p;
}

QrmSolution solve_window(const OptionWindow& window, const QrmConfig& cfg) {
    const QrmProblem problem = make_problem(window, cfg);
    const QuadraticForm form = assemble_functional(problem);
    QrmSolution sol;
    sol.u = minimize(form, cfg);
    sol.forecast = forecast_price(sol.u, problem);
    sol.residual_norm = residual_norm(problem, sol.u);
    sol.objective = evaluate_objective(problem, sol.u);
    return sol;
}

std::vector<WindowForecast> forecast_windows(const std::vector<OptionWindow>& windows,
                                             const QrmConfig& cfg, int jobs) {
    std::vector<WindowForecast> out(windows.size());
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    jobs = std::min<std::size_t>(jobs, windows.size() > 0 ? windows.size() : 1);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= windows.size()) break;
            WindowForecast& row = out[k];
            row.option_id = windows[k].option_id;
            row.date = windows[k].today().date;
            try {
                row.solution = solve_window(windows[k], cfg);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    return out;
}

std::string forecasts_to_csv(const std::vector<WindowForecast>& rows) {
    std::string out = "option_id,date,forecast,residual_norm,objective\n";
    for (const auto& row : rows) {
        if (!row.solution.has_value()) continue;
        out += row.option_id;
        out += ',';
        out += row.date.to_string();
        out += ',';
        out += format_double(row.solution->forecast);
        out += ',';
        out += format_double(row.solution->residual_norm);
        out += ',';
        out += format_double(row.solution->objective);
        out += '\n';
    }
    return out;
}

}  // namespace optcast
