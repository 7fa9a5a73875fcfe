#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "specsense/baselines.hpp"
#include "specsense/config.hpp"
#include "specsense/detection.hpp"
#include "specsense/di.hpp"
#include "specsense/gt.hpp"
#include "specsense/model.hpp"
#include "specsense/rng.hpp"

namespace specsense {

// ---------------------------------------------------------------------------
// Deterministic experiment engine. Every random quantity comes from a
// substream keyed on (master_seed, grid point, trial, purpose), so results
// are bit-identical across runs and across worker counts, and policies
// sharing a measurement design see identical observations.

inline ExperimentConfig config_at_axis(const ExperimentConfig& base, double value) {
    ExperimentConfig c = base;
    switch (base.axis) {
        case SweepAxis::none: break;
        case SweepAxis::rho_over_r: c.penalty_over_reward = value; break;
        case SweepAxis::k_over_n:
            if (!(value > 0.0)) throw std::invalid_argument("k_over_n axis value must be > 0");
            c.n_resources = std::max(2, static_cast<int>(std::lround(base.horizon / value)));
            break;
        case SweepAxis::snr_min_db: c.snr_min_db = value; break;
    }
    return c;
}

inline double power_floor(const ExperimentConfig& cfg) {
    return cfg.noise_power * std::pow(10.0, cfg.snr_min_db / 10.0);
}

inline ResourceEnsemble build_ensemble(const ExperimentConfig& cfg, std::uint64_t grid_index) {
    RngStream rng(cfg.master_seed, {grid_index, static_cast<std::uint64_t>(StreamTag::ensemble)});
    ResourceEnsemble e;
    e.mode = cfg.mode;
    e.horizon = cfg.horizon;
    e.min_signal_power = power_floor(cfg);
    const int n = cfg.n_resources;
    e.prior_empty.resize(n);
    e.reward.resize(n);
    e.penalty.resize(n);
    e.noise_power.assign(n, cfg.noise_power);
    for (int i = 0; i < n; ++i) {
        double r = cfg.reward.value;
        if (cfg.reward.kind == RewardModel::Kind::log2_rate) {
            const double snr_db = rng.uniform(cfg.reward.snr_db_lo, cfg.reward.snr_db_hi);
            r = std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
        }
        e.reward[i] = r;
        e.penalty[i] = cfg.penalty_over_reward * r;
        const double bound = cfg.mode == Mode::SS ? e.penalty[i] / (e.penalty[i] + r)
                                                  : r / (e.penalty[i] + r);
        switch (cfg.prior.kind) {
            case PriorModel::Kind::fixed: e.prior_empty[i] = cfg.prior.value; break;
            case PriorModel::Kind::at_bound:
                e.prior_empty[i] = cfg.mode == Mode::SS ? std::nextafter(bound, 0.0)
                                                        : std::nextafter(bound, 1.0);
                break;
            case PriorModel::Kind::uniform_to_bound: {
                // hardest admissible prior is the bound itself; stay strictly inside
                double w = cfg.mode == Mode::SS ? rng.uniform(cfg.prior.lo, bound)
                                                : rng.uniform(bound, cfg.prior.lo);
                if (cfg.mode == Mode::SS && !(w < bound)) w = std::nextafter(bound, 0.0);
                if (cfg.mode == Mode::R && !(w > bound)) w = std::nextafter(bound, 1.0);
                e.prior_empty[i] = w;
                break;
            }
        }
    }
    return validate_ensemble(std::move(e));
}

/// Occupancy plus the power each resource would deliver if busy. The
/// planner only ever sees the floor; the realized power feeds the
/// observation model and the genie-aided benchmark.
struct TrialDraw {
    GroundTruth truth;
    std::vector<double> potential_power;
};

inline TrialDraw draw_ground_truth(const ResourceEnsemble& ens, const ExperimentConfig& cfg,
                                   RngStream& rng) {
    TrialDraw d;
    const int n = ens.size();
    d.truth.occupied.resize(n);
    d.truth.signal_power.resize(n);
    d.potential_power.resize(n);
    for (int i = 0; i < n; ++i) {
        d.truth.occupied[i] = rng.bernoulli(1.0 - ens.prior_empty[i]) ? 1 : 0;
        const double snr_db = cfg.snr_min_db + cfg.snr_spread_db * rng.uniform01();
        d.potential_power[i] = ens.noise_power[i] * std::pow(10.0, snr_db / 10.0);
        d.truth.signal_power[i] = d.truth.occupied[i] ? d.potential_power[i] : 0.0;
    }
    return d;
}

// ---------------------------------------------------------------------------

struct PolicyContext {
    PolicySpec spec;
    SensingPlan plan;                 // measurement design (empty for MWC)
    std::uint64_t obs_tag = 0;        // observation substream group
    DenseSensingMatrix lasso_matrix;  // LASSO-dense only
    std::vector<double> lasso_lambda;
    DenseSensingMatrix mwc_matrix;  // MWC only
    int mwc_frames = 1;
    std::vector<double> mwc_lambda;  // absolute l1 weights, ascending
};

namespace detail {

inline std::uint64_t obs_group(const PolicySpec& s) {
    switch (s.kind) {
        case PolicyKind::DI: return 1;
        case PolicyKind::GT:
        case PolicyKind::MAP: return 100 + static_cast<std::uint64_t>(s.pool);
        case PolicyKind::LassoDense: return 200 + static_cast<std::uint64_t>(s.pool);
        case PolicyKind::MWC: return 300;
    }
    return 0;
}

inline std::vector<int> sensed_resources(const SensingPlan& plan) {
    std::vector<int> out;
    for (const auto& c : plan.cycles) out.insert(out.end(), c.members.begin(), c.members.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

inline PolicyContext build_policy_context(const PolicySpec& spec, const ExperimentConfig& cfg,
                                          const ResourceEnsemble& ens, std::uint64_t grid_index) {
    PolicyContext ctx;
    ctx.spec = spec;
    ctx.obs_tag = detail::obs_group(spec);
    switch (spec.kind) {
        case PolicyKind::DI: ctx.plan = di_plan(ens, ens.horizon); break;
        case PolicyKind::GT:
        case PolicyKind::MAP: ctx.plan = greedy_plan(ens, ens.horizon, spec.pool); break;
        case PolicyKind::LassoDense: {
            ctx.plan = greedy_plan(ens, ens.horizon, spec.pool);
            const auto sensed = detail::sensed_resources(ctx.plan);
            if (!sensed.empty() && ctx.plan.kappa() > 0) {
                RngStream mrng(cfg.master_seed,
                               {grid_index, static_cast<std::uint64_t>(StreamTag::matrix),
                                ctx.obs_tag});
                ctx.lasso_matrix = make_random_dense_matrix(ctx.plan.kappa(), sensed, mrng);
                ctx.lasso_lambda.resize(sensed.size());
                for (std::size_t c = 0; c < sensed.size(); ++c)
                    ctx.lasso_lambda[c] = cfg.lasso.lambda_fixed >= 0.0
                                              ? cfg.lasso.lambda_fixed
                                              : di_gamma(sensed[c], ens);
            }
            break;
        }
        case PolicyKind::MWC: {
            std::vector<int> all(ens.size());
            for (int i = 0; i < ens.size(); ++i) all[i] = i;
            RngStream mrng(cfg.master_seed,
                           {grid_index, static_cast<std::uint64_t>(StreamTag::matrix), ctx.obs_tag});
            ctx.mwc_matrix = make_random_dense_matrix(cfg.mwc.channels, all, mrng);
            if (cfg.mwc.frames_override > 0) {
                ctx.mwc_frames = cfg.mwc.frames_override;
            } else {
                // budget reference: the pooled pair plan's test count
                const int kappa_ref = greedy_plan(ens, ens.horizon, 2).kappa();
                ctx.mwc_frames = std::max(
                    1, static_cast<int>(std::floor(cfg.mwc.budget_factor * kappa_ref /
                                                   std::max(1, cfg.mwc.channels))));
            }
            const auto rel =
                cfg.mwc.lambda_rel.empty() ? MwcConfig::default_lambda_rel() : cfg.mwc.lambda_rel;
            const double scale = cfg.mwc.channels * ens.min_signal_power;
            for (double r : rel) ctx.mwc_lambda.push_back(r * scale);
            std::sort(ctx.mwc_lambda.begin(), ctx.mwc_lambda.end());
            break;
        }
    }
    return ctx;
}

// ---------------------------------------------------------------------------

struct TrialStats {
    double utility = 0.0;
    int kappa = 0;
    long fa_events = 0, fa_opportunities = 0;  // declared busy while idle
    long md_events = 0, md_opportunities = 0;  // declared idle while busy
};

inline TrialStats score_decisions(std::span<const std::uint8_t> decision,
                                  std::span<const std::uint8_t> tested, const GroundTruth& truth,
                                  const ResourceEnsemble& ens, int kappa_used) {
    TrialStats st;
    st.kappa = kappa_used;
    for (int i = 0; i < ens.size(); ++i) {
        if (!tested[i]) continue;
        if (truth.occupied[i]) {
            ++st.md_opportunities;
            st.md_events += decision[i] == 0 ? 1 : 0;
        } else {
            ++st.fa_opportunities;
            st.fa_events += decision[i] == 1 ? 1 : 0;
        }
    }
    st.utility = realized_utility(decision, tested, truth, ens, ens.horizon, kappa_used);
    return st;
}

struct TrialOutput {
    TrialRecord record;
    TrialStats stats;
};

/// Executes one policy on one trial: draws the ground truth, samples the
/// plan's observations, decides, and scores the realized utility.
/// Deterministic in (config, grid_index, trial_index, policy).
inline TrialOutput run_trial(const PolicyContext& ctx, const ResourceEnsemble& ens,
                             const ExperimentConfig& cfg, std::uint64_t grid_index,
                             std::uint64_t trial_index) {
    RngStream truth_rng(cfg.master_seed,
                        {grid_index, trial_index,
                         static_cast<std::uint64_t>(StreamTag::ground_truth)});
    const TrialDraw draw = draw_ground_truth(ens, cfg, truth_rng);
    RngStream obs_rng(cfg.master_seed,
                      {grid_index, trial_index,
                       static_cast<std::uint64_t>(StreamTag::observations), ctx.obs_tag});

    TrialOutput out;
    auto& rec = out.record;
    rec.decision.assign(ens.size(), null_decision(ens.mode));
    rec.tested.assign(ens.size(), 0);

    switch (ctx.spec.kind) {
        case PolicyKind::DI:
        case PolicyKind::GT: {
            for (const auto& cycle : ctx.plan.cycles) {
                const double y = sample_observation(theta_of(cycle, draw.truth, ens), obs_rng);
                const bool positive = glrt_decide(y, cycle, ens);
                rec.observations.push_back(y);
                rec.test_positive.push_back(positive ? 1 : 0);
                for (int i : cycle.members) {
                    rec.tested[i] = 1;
                    rec.decision[i] = positive ? 1 : 0;
                }
            }
            break;
        }
        case PolicyKind::MAP: {
            std::vector<double> busy_power;
            for (const auto& cycle : ctx.plan.cycles) {
                const double y = sample_observation(theta_of(cycle, draw.truth, ens), obs_rng);
                rec.observations.push_back(y);
                rec.test_positive.push_back(glrt_decide(y, cycle, ens) ? 1 : 0);
                busy_power.clear();
                for (int i : cycle.members)
                    busy_power.push_back(cfg.map_uses_true_power ? draw.potential_power[i]
                                                                 : ens.min_signal_power);
                const auto marginals = exact_group_posterior(y, cycle.members, ens, busy_power);
                for (std::size_t j = 0; j < cycle.members.size(); ++j) {
                    const int i = cycle.members[j];
                    rec.tested[i] = 1;
                    rec.decision[i] = map_decide(marginals[j], i, ens) ? 1 : 0;
                }
            }
            break;
        }
        case PolicyKind::LassoDense: {
            if (ctx.plan.kappa() == 0) break;
            std::vector<double> y(ctx.lasso_matrix.rows), weights(ctx.lasso_matrix.rows);
            for (int r = 0; r < ctx.lasso_matrix.rows; ++r) {
                const double theta = theta_weighted(ctx.lasso_matrix.row(r),
                                                    ctx.lasso_matrix.columns, draw.truth, ens);
                double acc = 0.0;
                for (int s = 0; s < cfg.lasso.avg_samples; ++s) acc += obs_rng.exponential(theta);
                y[r] = acc / cfg.lasso.avg_samples;
                weights[r] = 1.0 / (y[r] * y[r]);  // linearized-likelihood weighting
                rec.observations.push_back(y[r]);
            }
            const auto problem = make_lasso_problem(ctx.lasso_matrix, y, ctx.lasso_lambda, weights,
                                                    ens);
            const auto sol = lasso_solve(problem, cfg.lasso.tol, cfg.lasso.max_sweeps);
            const auto outcome = baseline_detect_and_utility(
                sol.phi, ctx.lasso_matrix.columns, ens, draw.truth, ens.horizon, ctx.plan.kappa(),
                cfg.lasso.eps_det_frac * ens.min_signal_power);
            rec.decision = outcome.decision;
            rec.tested = outcome.tested;
            break;
        }
        case PolicyKind::MWC:
            throw std::invalid_argument("MWC is scored by the roc pipeline, not per-trial utility");
    }

    out.stats = score_decisions(rec.decision, rec.tested, draw.truth, ens, ctx.plan.kappa());
    rec.realized_utility = out.stats.utility;
    return out;
}

// ---------------------------------------------------------------------------
// Aggregation. Per-trial statistics land in a slot indexed by trial, then
// reduce in trial order with compensated summation: worker count cannot
// change a single output bit.

struct NeumaierSum {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

inline int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

template <typename Fn>
inline void parallel_for(int count, int workers, Fn&& body) {
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::string first_error;
    auto work = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error.empty())
                    first_error = "trial " + std::to_string(i) + ": " + e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (!first_error.empty()) throw std::runtime_error("monte_carlo aborted: " + first_error);
}

struct PolicySummary {
    std::string policy;
    double axis_value = 0.0;
    double mean_utility = 0.0;
    double std_err = 0.0;
    double mean_kappa = 0.0;
    double mean_alpha = 0.0;
    double mean_beta = 0.0;
    long trials = 0;
};

inline PolicySummary summarize(std::span<const TrialStats> stats) {
    PolicySummary s;
    s.trials = static_cast<long>(stats.size());
    NeumaierSum util, kappa;
    long fa_e = 0, fa_o = 0, md_e = 0, md_o = 0;
    for (const auto& st : stats) {
        util.add(st.utility);
        kappa.add(st.kappa);
        fa_e += st.fa_events;
        fa_o += st.fa_opportunities;
        md_e += st.md_events;
        md_o += st.md_opportunities;
    }
    s.mean_utility = util.value() / s.trials;
    s.mean_kappa = kappa.value() / s.trials;
    NeumaierSum sq;
    for (const auto& st : stats) {
        const double d = st.utility - s.mean_utility;
        sq.add(d * d);
    }
    s.std_err = s.trials > 1 ? std::sqrt(sq.value() / (static_cast<double>(s.trials) *
                                                       (s.trials - 1.0)))
                             : 0.0;
    s.mean_alpha = fa_o > 0 ? static_cast<double>(fa_e) / fa_o : 0.0;
    s.mean_beta = md_o > 0 ? static_cast<double>(md_e) / md_o : 0.0;
    return s;
}

/// Runs every configured policy at one grid point.
inline std::vector<PolicySummary> run_grid_point(const ExperimentConfig& base,
                                                 std::uint64_t grid_index, double axis_value) {
    const ExperimentConfig cfg =
        base.axis == SweepAxis::none ? base : config_at_axis(base, axis_value);
    cfg.require_valid();
    const ResourceEnsemble ens = build_ensemble(cfg, grid_index);
    const int workers = resolve_workers(cfg.workers);
    std::vector<PolicySummary> out;
    for (const auto& spec : cfg.policies) {
        if (spec.kind == PolicyKind::MWC)
            throw std::invalid_argument(
                "policy MWC produces ROC curves; run it through the roc pipeline");
        const PolicyContext ctx = build_policy_context(spec, cfg, ens, grid_index);
        std::vector<TrialStats> stats(cfg.trials);
        parallel_for(cfg.trials, workers, [&](int t) {
            stats[t] = run_trial(ctx, ens, cfg, grid_index,
                                 static_cast<std::uint64_t>(t)).stats;
        });
        PolicySummary s = summarize(stats);
        s.policy = spec.label();
        s.axis_value = axis_value;
        out.push_back(std::move(s));
    }
    return out;
}

// Single-point run; a configured sweep collapses to its first grid value.
inline std::vector<PolicySummary> monte_carlo(const ExperimentConfig& cfg) {
    if (cfg.axis != SweepAxis::none && !cfg.axis_values.empty())
        return run_grid_point(cfg, 0, cfg.axis_values.front());
    ExperimentConfig point = cfg;
    point.axis = SweepAxis::none;
    return run_grid_point(point, 0, 0.0);
}

// ---------------------------------------------------------------------------
// CSV emission. Fixed "%.12g" rendering keeps files byte-stable.

inline std::string fmt_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline void write_sweep_header(std::ostream& os) {
    os << "axis,policy,mean_utility,std_err,mean_kappa,mean_alpha,mean_beta,trials\n";
}

inline void write_sweep_row(std::ostream& os, const PolicySummary& s) {
    os << fmt_num(s.axis_value) << ',' << s.policy << ',' << fmt_num(s.mean_utility) << ','
       << fmt_num(s.std_err) << ',' << fmt_num(s.mean_kappa) << ',' << fmt_num(s.mean_alpha) << ','
       << fmt_num(s.mean_beta) << ',' << s.trials << '\n';
}

/// One Monte-Carlo batch per grid value per policy, streamed to CSV.
/// Rows for completed grid points are flushed before any later failure.
inline std::vector<PolicySummary> sweep(const ExperimentConfig& cfg, std::ostream& os) {
    cfg.require_valid();
    write_sweep_header(os);
    os.flush();
    std::vector<PolicySummary> all;
    if (cfg.axis == SweepAxis::none) {
        for (auto& s : run_grid_point(cfg, 0, 0.0)) {
            write_sweep_row(os, s);
            all.push_back(std::move(s));
        }
        os.flush();
        return all;
    }
    for (std::size_t g = 0; g < cfg.axis_values.size(); ++g) {
        for (auto& s : run_grid_point(cfg, g, cfg.axis_values[g])) {
            write_sweep_row(os, s);
            all.push_back(std::move(s));
        }
        os.flush();
    }
    return all;
}

// ---------------------------------------------------------------------------
// ROC pipeline (static-matrix baseline vs the optimized operating points).

struct RocPoint {
    std::string policy;
    double lambda = std::numeric_limits<double>::quiet_NaN();  // NaN: not a sweep point
    double p_fa = 0.0, p_fa_err = 0.0;
    double p_d = 0.0, p_d_err = 0.0;
    long trials = 0;
};

namespace detail {

struct EventCounts {
    long fa_events = 0, fa_opportunities = 0;
    long d_events = 0, d_opportunities = 0;  // detections among busy resources
};

inline RocPoint to_roc_point(const EventCounts& c, std::string policy, double lambda, long trials) {
    RocPoint p;
    p.policy = std::move(policy);
    p.lambda = lambda;
    p.trials = trials;
    if (c.fa_opportunities > 0) {
        p.p_fa = static_cast<double>(c.fa_events) / c.fa_opportunities;
        p.p_fa_err = std::sqrt(std::max(p.p_fa * (1.0 - p.p_fa), 0.0) / c.fa_opportunities);
    }
    if (c.d_opportunities > 0) {
        p.p_d = static_cast<double>(c.d_events) / c.d_opportunities;
        p.p_d_err = std::sqrt(std::max(p.p_d * (1.0 - p.p_d), 0.0) / c.d_opportunities);
    }
    return p;
}

}  // namespace detail

/// Detection/false-alarm operating points: one per configured plan policy,
/// and one per l1 weight for the static-matrix covariance baseline.
inline std::vector<RocPoint> roc(const ExperimentConfig& cfg) {
    cfg.require_valid();
    const ResourceEnsemble ens = build_ensemble(cfg, 0);
    const int workers = resolve_workers(cfg.workers);
    std::vector<RocPoint> points;

    for (const auto& spec : cfg.policies) {
        const PolicyContext ctx = build_policy_context(spec, cfg, ens, 0);
        if (spec.kind != PolicyKind::MWC) {
            std::vector<TrialStats> stats(cfg.trials);
            parallel_for(cfg.trials, workers, [&](int t) {
                stats[t] = run_trial(ctx, ens, cfg, 0, static_cast<std::uint64_t>(t)).stats;
            });
            detail::EventCounts c;
            for (const auto& st : stats) {
                c.fa_events += st.fa_events;
                c.fa_opportunities += st.fa_opportunities;
                c.d_events += st.md_opportunities - st.md_events;
                c.d_opportunities += st.md_opportunities;
            }
            points.push_back(detail::to_roc_point(
                c, spec.label(), std::numeric_limits<double>::quiet_NaN(), cfg.trials));
            continue;
        }

        const int n_lambda = static_cast<int>(ctx.mwc_lambda.size());
        std::vector<std::vector<detail::EventCounts>> per_trial(
            cfg.trials, std::vector<detail::EventCounts>(n_lambda));
        parallel_for(cfg.trials, workers, [&](int t) {
            RngStream truth_rng(cfg.master_seed,
                                {0ULL, static_cast<std::uint64_t>(t),
                                 static_cast<std::uint64_t>(StreamTag::ground_truth)});
            const TrialDraw draw = draw_ground_truth(ens, cfg, truth_rng);
            RngStream obs_rng(cfg.master_seed,
                              {0ULL, static_cast<std::uint64_t>(t),
                               static_cast<std::uint64_t>(StreamTag::observations), ctx.obs_tag});
            const auto z =
                mwc_observations(draw.truth, ctx.mwc_matrix, ens, ctx.mwc_frames, obs_rng);
            const std::vector<double> weights(ctx.mwc_matrix.rows, 1.0);
            const double eps = cfg.mwc.eps_det_frac * ens.min_signal_power;
            std::vector<double> warm;
            // descending lambda keeps warm starts close to each solution
            for (int li = n_lambda - 1; li >= 0; --li) {
                const std::vector<double> lam(ctx.mwc_matrix.cols(), ctx.mwc_lambda[li]);
                const auto problem = make_lasso_problem(ctx.mwc_matrix, z, lam, weights, ens);
                auto sol = lasso_solve(problem, cfg.lasso.tol, cfg.lasso.max_sweeps, warm);
                warm = sol.phi;
                auto& c = per_trial[t][li];
                for (int col = 0; col < ctx.mwc_matrix.cols(); ++col) {
                    const int i = ctx.mwc_matrix.columns[col];
                    const bool declared_busy = sol.phi[col] > eps;
                    if (draw.truth.occupied[i]) {
                        ++c.d_opportunities;
                        c.d_events += declared_busy ? 1 : 0;
                    } else {
                        ++c.fa_opportunities;
                        c.fa_events += declared_busy ? 1 : 0;
                    }
                }
            }
        });
        for (int li = 0; li < n_lambda; ++li) {
            detail::EventCounts c;
            for (int t = 0; t < cfg.trials; ++t) {
                c.fa_events += per_trial[t][li].fa_events;
                c.fa_opportunities += per_trial[t][li].fa_opportunities;
                c.d_events += per_trial[t][li].d_events;
                c.d_opportunities += per_trial[t][li].d_opportunities;
            }
            points.push_back(detail::to_roc_point(c, "MWC", ctx.mwc_lambda[li], cfg.trials));
        }
    }
    return points;
}

inline void write_roc_csv(std::ostream& os, std::span<const RocPoint> points) {
    os << "policy,lambda,p_fa,p_fa_err,p_d,p_d_err,trials\n";
    for (const auto& p : points) {
        os << p.policy << ',';
        if (!std::isnan(p.lambda)) os << fmt_num(p.lambda);
        os << ',' << fmt_num(p.p_fa) << ',' << fmt_num(p.p_fa_err) << ',' << fmt_num(p.p_d) << ','
           << fmt_num(p.p_d_err) << ',' << p.trials << '\n';
    }
}

}  // namespace specsense
