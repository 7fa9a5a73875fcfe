#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "specsense/model.hpp"
#include "specsense/rng.hpp"

namespace specsense {

/// Static non-negative mixing matrix over a subset of resources.
/// columns[c] maps matrix column c to its resource index.
struct DenseSensingMatrix {
    int rows = 0;
    std::vector<int> columns;
    std::vector<double> data;  // row-major, rows x columns.size()

    int cols() const { return static_cast<int>(columns.size()); }
    std::span<const double> row(int r) const {
        return std::span<const double>(data).subspan(static_cast<std::size_t>(r) * columns.size(),
                                                     columns.size());
    }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * columns.size() + c]; }
};

inline void validate_matrix(const DenseSensingMatrix& m) {
    if (m.rows <= 0 || m.cols() <= 0) throw std::invalid_argument("sensing matrix: empty");
    if (m.data.size() != static_cast<std::size_t>(m.rows) * m.columns.size())
        throw std::invalid_argument("sensing matrix: data size mismatch");
    for (int r = 0; r < m.rows; ++r) {
        double s = 0.0;
        for (double v : m.row(r)) {
            if (!(v >= 0.0)) throw std::invalid_argument("sensing matrix: negative entry");
            s += v;
        }
        if (!(s > 0.0)) throw std::invalid_argument("sensing matrix: all-zero row");
    }
}

// Entries drawn as |CN(0,1)|^2, i.e. unit-mean exponential: the power-domain
// footprint of random unit-variance mixing chips.
inline DenseSensingMatrix make_random_dense_matrix(int rows, std::vector<int> columns,
                                                   RngStream& rng) {
    DenseSensingMatrix m;
    m.rows = rows;
    m.columns = std::move(columns);
    m.data.resize(static_cast<std::size_t>(rows) * m.columns.size());
    for (double& v : m.data) v = rng.exponential(1.0);
    return m;
}

inline DenseSensingMatrix make_all_ones_matrix(int rows, std::vector<int> columns) {
    DenseSensingMatrix m;
    m.rows = rows;
    m.columns = std::move(columns);
    m.data.assign(static_cast<std::size_t>(rows) * m.columns.size(), 1.0);
    return m;
}

/// Non-negative weighted-l1 least-squares problem
///   min_{phi >= 0}  sum_c lambda_c phi_c
///                 + 1/2 sum_r w_r (y_r - sum_c B_rc (phi_c + n_c))^2
struct LassoProblem {
    DenseSensingMatrix matrix;
    std::vector<double> observations;   // y, one per row
    std::vector<double> l1_weights;     // lambda, one per column
    std::vector<double> data_weights;   // w, one per row
    std::vector<double> noise_rowsum;   // (B n)_r, precomputed
};

inline LassoProblem make_lasso_problem(DenseSensingMatrix matrix, std::vector<double> observations,
                                       std::vector<double> l1_weights,
                                       std::vector<double> data_weights,
                                       const ResourceEnsemble& ens) {
    validate_matrix(matrix);
    LassoProblem p;
    p.matrix = std::move(matrix);
    if (observations.size() != static_cast<std::size_t>(p.matrix.rows) ||
        data_weights.size() != observations.size() ||
        l1_weights.size() != static_cast<std::size_t>(p.matrix.cols()))
        throw std::invalid_argument("lasso problem: dimension mismatch");
    for (double l : l1_weights)
        if (!(l >= 0.0)) throw std::invalid_argument("lasso problem: lambda must be >= 0");
    for (double w : data_weights)
        if (!(w > 0.0)) throw std::invalid_argument("lasso problem: data weight must be > 0");
    p.observations = std::move(observations);
    p.l1_weights = std::move(l1_weights);
    p.data_weights = std::move(data_weights);
    p.noise_rowsum.resize(p.matrix.rows);
    for (int r = 0; r < p.matrix.rows; ++r) {
        double s = 0.0;
        const auto row = p.matrix.row(r);
        for (int c = 0; c < p.matrix.cols(); ++c) s += row[c] * ens.noise_power[p.matrix.columns[c]];
        p.noise_rowsum[r] = s;
    }
    return p;
}

inline double lasso_objective(std::span<const double> phi, const LassoProblem& p) {
    if (phi.size() != static_cast<std::size_t>(p.matrix.cols()))
        throw std::invalid_argument("lasso_objective: phi dimension mismatch");
    double obj = 0.0;
    for (int c = 0; c < p.matrix.cols(); ++c) obj += p.l1_weights[c] * phi[c];
    for (int r = 0; r < p.matrix.rows; ++r) {
        double fit = p.noise_rowsum[r];
        const auto row = p.matrix.row(r);
        for (int c = 0; c < p.matrix.cols(); ++c) fit += row[c] * phi[c];
        const double e = p.observations[r] - fit;
        obj += 0.5 * p.data_weights[r] * e * e;
    }
    return obj;
}

struct LassoResult {
    std::vector<double> phi;
    bool converged = false;
    int sweeps = 0;
    double last_change = 0.0;
};

/// Cyclic coordinate descent with non-negativity clamping, warm-startable.
/// Each sweep performs exact per-coordinate minimization, so the objective
/// never increases; that is checked and a violation beyond rounding slack
/// reports a broken problem.
inline LassoResult lasso_solve(const LassoProblem& p, double tol = 1e-8, int max_sweeps = 2000,
                               std::vector<double> warm_start = {}) {
    const int nc = p.matrix.cols(), nr = p.matrix.rows;
    LassoResult res;
    res.phi.assign(nc, 0.0);
    if (!warm_start.empty()) {
        if (warm_start.size() != static_cast<std::size_t>(nc))
            throw std::invalid_argument("lasso_solve: warm start dimension mismatch");
        for (double v : warm_start)
            if (!(v >= 0.0)) throw std::invalid_argument("lasso_solve: warm start must be >= 0");
        res.phi = std::move(warm_start);
    }

    std::vector<double> resid(nr);
    for (int r = 0; r < nr; ++r) {
        double fit = p.noise_rowsum[r];
        const auto row = p.matrix.row(r);
        for (int c = 0; c < nc; ++c) fit += row[c] * res.phi[c];
        resid[r] = p.observations[r] - fit;
    }
    std::vector<double> curvature(nc, 0.0);
    for (int c = 0; c < nc; ++c) {
        double h = 0.0;
        for (int r = 0; r < nr; ++r) h += p.data_weights[r] * p.matrix.at(r, c) * p.matrix.at(r, c);
        curvature[c] = h;
    }

    double prev_obj = lasso_objective(res.phi, p);
    for (res.sweeps = 1; res.sweeps <= max_sweeps; ++res.sweeps) {
        double max_change = 0.0;
        for (int c = 0; c < nc; ++c) {
            if (!(curvature[c] > 0.0)) continue;  // column absent from every row
            double grad = 0.0;
            for (int r = 0; r < nr; ++r) grad += p.data_weights[r] * p.matrix.at(r, c) * resid[r];
            const double target = res.phi[c] + (grad - p.l1_weights[c]) / curvature[c];
            const double next = std::max(target, 0.0);
            const double delta = next - res.phi[c];
            if (delta != 0.0) {
                res.phi[c] = next;
                for (int r = 0; r < nr; ++r) resid[r] -= p.matrix.at(r, c) * delta;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        res.last_change = max_change;
        const double obj = lasso_objective(res.phi, p);
        if (obj > prev_obj + 1e-9 * (1.0 + std::abs(prev_obj)))
            throw std::logic_error("lasso_solve: objective increased across a sweep");
        prev_obj = obj;
        if (max_change < tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

/// Pooled power estimates for a static matrix front-end: each row reports
/// the sample mean of num_samples independent energy draws with mean
/// theta_r = sum_c B_rc (sphi + n)_c. The estimation noise enters through
/// the finite averaging, not as a separate additive term.
inline std::vector<double> mwc_observations(const GroundTruth& truth,
                                            const DenseSensingMatrix& matrix,
                                            const ResourceEnsemble& ens, int num_samples,
                                            RngStream& rng) {
    if (num_samples < 1) throw std::invalid_argument("mwc_observations: num_samples must be >= 1");
    std::vector<double> z(matrix.rows);
    for (int r = 0; r < matrix.rows; ++r) {
        const double theta = theta_weighted(matrix.row(r), matrix.columns, truth, ens);
        double acc = 0.0;
        for (int s = 0; s < num_samples; ++s) acc += rng.exponential(theta);
        z[r] = acc / num_samples;
    }
    return z;
}

struct BaselineOutcome {
    std::vector<std::uint8_t> decision;  // over all N resources
    std::vector<std::uint8_t> tested;
    double utility = 0.0;
};

/// Support thresholding of the recovered powers plus utility scoring.
/// Resources outside the matrix columns keep the null action.
inline BaselineOutcome baseline_detect_and_utility(std::span<const double> phi_hat,
                                                   std::span<const int> columns,
                                                   const ResourceEnsemble& ens,
                                                   const GroundTruth& truth, int horizon,
                                                   int kappa_used, double detect_threshold) {
    if (phi_hat.size() != columns.size())
        throw std::invalid_argument("baseline_detect_and_utility: dimension mismatch");
    BaselineOutcome out;
    out.decision.assign(ens.size(), null_decision(ens.mode));
    out.tested.assign(ens.size(), 0);
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out.tested[columns[c]] = 1;
        out.decision[columns[c]] = phi_hat[c] > detect_threshold ? 1 : 0;
    }
    out.utility = realized_utility(out.decision, out.tested, truth, ens, horizon, kappa_used);
    return out;
}

}  // namespace specsense
