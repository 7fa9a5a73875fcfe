#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "specsense/model.hpp"

namespace specsense {

enum class PolicyKind : std::uint8_t { DI, GT, MAP, LassoDense, MWC };

struct PolicySpec {
    PolicyKind kind = PolicyKind::DI;
    int pool = 1;  // max mixed resources of the underlying plan (GT/MAP/LASSO)

    std::string label() const {
        switch (kind) {
            case PolicyKind::DI: return "DI";
            case PolicyKind::GT: return "GT" + std::to_string(pool);
            case PolicyKind::MAP: return "MAP" + std::to_string(pool);
            case PolicyKind::LassoDense: return "LASSO" + std::to_string(pool);
            case PolicyKind::MWC: return "MWC";
        }
        return "?";
    }
};

inline PolicySpec parse_policy(const std::string& s) {
    auto tail_int = [&](std::size_t prefix_len) {
        const int v = std::stoi(s.substr(prefix_len));
        if (v < 1 || v > 8) throw std::invalid_argument("policy pool size out of range: " + s);
        return v;
    };
    if (s == "DI") return {PolicyKind::DI, 1};
    if (s == "MWC") return {PolicyKind::MWC, 1};
    if (s.rfind("GT", 0) == 0 && s.size() > 2) return {PolicyKind::GT, tail_int(2)};
    if (s.rfind("MAP", 0) == 0 && s.size() > 3) return {PolicyKind::MAP, tail_int(3)};
    if (s.rfind("LASSO", 0) == 0 && s.size() > 5) return {PolicyKind::LassoDense, tail_int(5)};
    throw std::invalid_argument("unknown policy: " + s +
                                " (expected DI, GT<l>, MAP<l>, LASSO<l> or MWC)");
}

enum class SweepAxis : std::uint8_t { none, rho_over_r, k_over_n, snr_min_db };

inline const char* axis_name(SweepAxis a) {
    switch (a) {
        case SweepAxis::none: return "none";
        case SweepAxis::rho_over_r: return "rho_over_r";
        case SweepAxis::k_over_n: return "k_over_n";
        case SweepAxis::snr_min_db: return "snr_min_db";
    }
    return "?";
}

inline SweepAxis parse_axis(const std::string& s) {
    if (s == "none") return SweepAxis::none;
    if (s == "rho_over_r") return SweepAxis::rho_over_r;
    if (s == "k_over_n") return SweepAxis::k_over_n;
    if (s == "snr_min_db") return SweepAxis::snr_min_db;
    throw std::invalid_argument("unknown sweep axis: " + s);
}

// Per-resource reward draw: a fixed value, or the spectral efficiency
// log2(1 + SNR) of a secondary link with SNR uniform in dB.
struct RewardModel {
    enum class Kind : std::uint8_t { fixed, log2_rate } kind = Kind::fixed;
    double value = 1.0;
    double snr_db_lo = 10.0;
    double snr_db_hi = 20.0;
};

// Prior P(s_i = 0): fixed, uniform between lo and the mode's admission
// bound, or pinned a half-ulp inside the bound ("hardest admissible").
struct PriorModel {
    enum class Kind : std::uint8_t { fixed, uniform_to_bound, at_bound } kind = Kind::fixed;
    double value = 0.9;
    double lo = 0.7;
};

struct LassoConfig {
    int avg_samples = 10;        // energy draws averaged per matrix row
    double eps_det_frac = 0.5;   // support threshold as a fraction of the power floor
    double lambda_fixed = -1.0;  // < 0: use the per-resource scan thresholds as weights
    double tol = 1e-8;
    int max_sweeps = 2000;
};

struct MwcConfig {
    int channels = 30;
    double budget_factor = 1.0;     // total samples relative to the pooled plan's budget
    int frames_override = 0;        // > 0: fix the per-channel sample count directly
    double eps_det_frac = 0.5;
    std::vector<double> lambda_rel;  // l1 weights relative to channels * power floor

    static std::vector<double> default_lambda_rel() {
        std::vector<double> g;
        for (int i = 0; i < 15; ++i) g.push_back(std::pow(10.0, -2.0 + 4.0 * i / 14.0));
        return g;
    }
};

struct ExperimentConfig {
    Mode mode = Mode::SS;
    int horizon = 30;
    int n_resources = 60;
    double noise_power = 1.0;
    double snr_min_db = 10.0;
    double snr_spread_db = 10.0;  // busy powers drawn U(snr_min, snr_min + spread) in dB
    RewardModel reward;
    double penalty_over_reward = 5.0;
    PriorModel prior;
    std::vector<PolicySpec> policies = {{PolicyKind::DI, 1}, {PolicyKind::GT, 2}};
    int trials = 10000;
    std::uint64_t master_seed = 1;
    int workers = 0;  // 0: hardware concurrency
    SweepAxis axis = SweepAxis::none;
    std::vector<double> axis_values;
    LassoConfig lasso;
    MwcConfig mwc;
    bool map_uses_true_power = true;
    std::string output_path;

    void require_valid() const {
        if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
        if (horizon < 2) throw std::invalid_argument("config: horizon must be >= 2");
        if (n_resources < 1) throw std::invalid_argument("config: n_resources must be >= 1");
        if (!(noise_power > 0.0)) throw std::invalid_argument("config: noise_power must be > 0");
        if (!(snr_spread_db >= 0.0)) throw std::invalid_argument("config: snr_spread_db must be >= 0");
        if (policies.empty()) throw std::invalid_argument("config: no policies");
        if (axis != SweepAxis::none && axis_values.empty() && !axis_values.empty())
            throw std::invalid_argument("config: sweep axis without values");
    }
};

// ---------------------------------------------------------------------------
// JSON round-trip. Key names follow the struct fields; unknown keys are
// rejected to catch typos early.

namespace detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    detail::check_keys(j,
                       {"mode", "horizon", "n_resources", "noise_power", "snr_min_db",
                        "snr_spread_db", "reward", "penalty_over_reward", "prior", "policies",
                        "trials", "master_seed", "workers", "sweep", "lasso", "mwc",
                        "map_uses_true_power", "output_path"},
                       "top level");
    if (j.contains("mode")) {
        const std::string m = j["mode"];
        if (m == "SS") c.mode = Mode::SS;
        else if (m == "R") c.mode = Mode::R;
        else throw std::invalid_argument("config: mode must be SS or R");
    }
    if (j.contains("horizon")) c.horizon = j["horizon"];
    if (j.contains("n_resources")) c.n_resources = j["n_resources"];
    if (j.contains("noise_power")) c.noise_power = j["noise_power"];
    if (j.contains("snr_min_db")) c.snr_min_db = j["snr_min_db"];
    if (j.contains("snr_spread_db")) c.snr_spread_db = j["snr_spread_db"];
    if (j.contains("reward")) {
        const auto& r = j["reward"];
        detail::check_keys(r, {"kind", "value", "snr_db_lo", "snr_db_hi"}, "reward");
        const std::string kind = r.value("kind", "fixed");
        if (kind == "fixed") {
            c.reward.kind = RewardModel::Kind::fixed;
            c.reward.value = r.value("value", 1.0);
        } else if (kind == "log2_rate") {
            c.reward.kind = RewardModel::Kind::log2_rate;
            c.reward.snr_db_lo = r.value("snr_db_lo", 10.0);
            c.reward.snr_db_hi = r.value("snr_db_hi", 20.0);
        } else {
            throw std::invalid_argument("config: reward.kind must be fixed or log2_rate");
        }
    }
    if (j.contains("penalty_over_reward")) c.penalty_over_reward = j["penalty_over_reward"];
    if (j.contains("prior")) {
        const auto& p = j["prior"];
        detail::check_keys(p, {"kind", "value", "lo"}, "prior");
        const std::string kind = p.value("kind", "fixed");
        if (kind == "fixed") {
            c.prior.kind = PriorModel::Kind::fixed;
            c.prior.value = p.value("value", 0.9);
        } else if (kind == "uniform_to_bound") {
            c.prior.kind = PriorModel::Kind::uniform_to_bound;
            c.prior.lo = p.value("lo", 0.7);
        } else if (kind == "at_bound") {
            c.prior.kind = PriorModel::Kind::at_bound;
        } else {
            throw std::invalid_argument(
                "config: prior.kind must be fixed, uniform_to_bound or at_bound");
        }
    }
    if (j.contains("policies")) {
        c.policies.clear();
        for (const auto& s : j["policies"]) c.policies.push_back(parse_policy(s));
    }
    if (j.contains("trials")) c.trials = j["trials"];
    if (j.contains("master_seed")) c.master_seed = j["master_seed"];
    if (j.contains("workers")) c.workers = j["workers"];
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        detail::check_keys(s, {"axis", "values"}, "sweep");
        c.axis = parse_axis(s.value("axis", "none"));
        c.axis_values.clear();
        if (s.contains("values"))
            for (const auto& v : s["values"]) c.axis_values.push_back(v);
    }
    if (j.contains("lasso")) {
        const auto& l = j["lasso"];
        detail::check_keys(l, {"avg_samples", "eps_det_frac", "lambda_fixed", "tol", "max_sweeps"},
                           "lasso");
        c.lasso.avg_samples = l.value("avg_samples", c.lasso.avg_samples);
        c.lasso.eps_det_frac = l.value("eps_det_frac", c.lasso.eps_det_frac);
        c.lasso.lambda_fixed = l.value("lambda_fixed", c.lasso.lambda_fixed);
        c.lasso.tol = l.value("tol", c.lasso.tol);
        c.lasso.max_sweeps = l.value("max_sweeps", c.lasso.max_sweeps);
    }
    if (j.contains("mwc")) {
        const auto& m = j["mwc"];
        detail::check_keys(
            m, {"channels", "budget_factor", "frames_override", "eps_det_frac", "lambda_rel"},
            "mwc");
        c.mwc.channels = m.value("channels", c.mwc.channels);
        c.mwc.budget_factor = m.value("budget_factor", c.mwc.budget_factor);
        c.mwc.frames_override = m.value("frames_override", c.mwc.frames_override);
        c.mwc.eps_det_frac = m.value("eps_det_frac", c.mwc.eps_det_frac);
        if (m.contains("lambda_rel")) {
            c.mwc.lambda_rel.clear();
            for (const auto& v : m["lambda_rel"]) c.mwc.lambda_rel.push_back(v);
        }
    }
    if (j.contains("map_uses_true_power")) c.map_uses_true_power = j["map_uses_true_power"];
    if (j.contains("output_path")) c.output_path = j["output_path"];
    c.require_valid();
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Named experiment presets mirroring the shipped study designs.

inline ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.mwc.lambda_rel = MwcConfig::default_lambda_rel();
    if (name == "fig3_ss" || name == "fig3_radar") {
        c.mode = name == "fig3_ss" ? Mode::SS : Mode::R;
        c.horizon = 30;
        c.n_resources = 60;
        c.snr_min_db = 10.0;
        c.snr_spread_db = 0.0;
        c.reward = {RewardModel::Kind::fixed, 1.0, 0, 0};
        c.prior.kind = PriorModel::Kind::at_bound;
        c.axis = SweepAxis::rho_over_r;
        c.axis_values = {0.5, 1.0, 2.0, 5.0, 10.0};
        c.policies = {parse_policy("DI"), parse_policy("GT2"), parse_policy("GT3"),
                      parse_policy("MAP2")};
        return c;
    }
    if (name == "fig4_k10" || name == "fig4_k30") {
        c.horizon = name == "fig4_k10" ? 10 : 30;
        c.reward.kind = RewardModel::Kind::log2_rate;
        c.penalty_over_reward = 5.0;
        c.prior.kind = PriorModel::Kind::uniform_to_bound;
        c.prior.lo = 0.7;
        c.snr_min_db = 10.0;
        c.snr_spread_db = 10.0;
        c.axis = SweepAxis::k_over_n;
        c.axis_values = {0.25, 0.5, 0.75, 1.0, 1.5};
        c.policies = {parse_policy("DI"), parse_policy("GT2"), parse_policy("GT3")};
        return c;
    }
    if (name == "fig5_k10" || name == "fig5_k30") {
        c.horizon = name == "fig5_k10" ? 10 : 30;
        c.n_resources = 20;
        c.reward.kind = RewardModel::Kind::log2_rate;
        c.penalty_over_reward = 5.0;
        c.prior.kind = PriorModel::Kind::uniform_to_bound;
        c.prior.lo = 0.7;
        c.snr_spread_db = 10.0;
        c.axis = SweepAxis::snr_min_db;
        c.axis_values = {0.0, 5.0, 10.0, 15.0, 20.0};
        c.policies = {parse_policy("DI"), parse_policy("GT2"), parse_policy("GT3"),
                      parse_policy("LASSO2")};
        return c;
    }
    if (name == "fig6_10db" || name == "fig6_20db") {
        c.horizon = 30;
        c.n_resources = 150;
        c.snr_min_db = name == "fig6_10db" ? 10.0 : 20.0;
        c.snr_spread_db = 0.0;
        c.reward = {RewardModel::Kind::fixed, 1.0, 0, 0};
        c.penalty_over_reward = 19.6;  // keeps a 0.95 idle prior strictly admissible
        c.prior.kind = PriorModel::Kind::fixed;
        c.prior.value = 0.95;
        c.policies = {parse_policy("DI"), parse_policy("GT2"), parse_policy("MWC")};
        c.mwc.channels = 30;
        c.mwc.budget_factor = 1.0;
        return c;
    }
    throw std::invalid_argument(
        "unknown preset: " + name +
        " (available: fig3_ss, fig3_radar, fig4_k10, fig4_k30, fig5_k10, fig5_k30, fig6_10db, "
        "fig6_20db)");
}

}  // namespace specsense
