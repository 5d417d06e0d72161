// Copyright 2026 The oqsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each criterion also has to finish within its runtime budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oqsim/adjoint.hpp"
#include "oqsim/config.hpp"
#include "oqsim/experiment.hpp"
#include "oqsim/lindblad.hpp"
#include "oqsim/models.hpp"
#include "oqsim/observables.hpp"
#include "oqsim/reconstruct.hpp"
#include "oracles.hpp"

namespace {

using namespace oqsim;

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [violated]");
    }
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

ExperimentConfig load(const char* name) {
    return parse_config_file(std::filesystem::path(OQSIM_SOURCE_DIR) / "configs" / name);
}

std::vector<ObservableSpec> specs(std::initializer_list<const char*> names) {
    std::vector<ObservableSpec> out;
    for (const char* s : names) {
        out.push_back(ObservableSpec::parse(s));
    }
    return out;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double lx = std::log(x[k]);
        const double ly = std::log(y[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome analytic_dephasing() {
    ExperimentConfig cfg = load("dephasing_1q.cfg");
    cfg.reference = false;
    const auto series = run_experiment(cfg).series;
    const auto t = series.times("pauli(X)", method_names::reconstructed);
    const auto x = series.values("pauli(X)", method_names::reconstructed);
    double dev = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        dev = std::max(dev, std::abs(x[k] - std::exp(-2.0 * cfg.gamma * t[k])));
    }
    Outcome o;
    o.check(t.size() == static_cast<std::size_t>(cfg.steps() + 1), "steps " + std::to_string(t.size() - 1));
    o.check(dev < cfg.total_time * cfg.dt, "max |<X> - exp(-2 gamma t)| = " + fmt("%.3e", dev) + " < 0.5");
    return o;
}

Outcome oracle_equivalence() {
    ExperimentConfig cfg = load("xy_chain_n4.cfg");
    cfg.observables = specs({"zz(0,1)", "zz(0,3)"});
    cfg.reference = true;
    cfg.reference_substeps = 10;
    const auto series = run_experiment(cfg).series;
    Outcome o;
    for (const char* obs : {"zz(0,1)", "zz(0,3)"}) {
        const auto t = series.times(obs, method_names::reconstructed);
        const auto rec = series.values(obs, method_names::reconstructed);
        const auto ref = series.values(obs, method_names::reference);
        double worst = 0.0;
        double envelope_ratio = 0.0;
        bool inside = true;
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double d = std::abs(rec[k] - ref[k]);
            worst = std::max(worst, d);
            const double env = t[k] * cfg.dt;
            inside = inside && (d < env || (k == 0 && d == 0.0));
            if (env > 0) {
                envelope_ratio = std::max(envelope_ratio, d / env);
            }
        }
        o.check(worst < cfg.total_time * cfg.dt, std::string(obs) + " max " + fmt("%.4f", worst) + " < 0.25");
        o.check(inside, std::string(obs) + " max |d|/(t dt) = " + fmt("%.3f", envelope_ratio) + " < 1");
    }
    return o;
}

Outcome convergence_order() {
    ExperimentConfig cfg = load("xy_chain_n4.cfg");
    const std::vector<double> dts = {0.1, 0.05, 0.025, 0.0125};
    const auto rows = sweep_dt(cfg, dts);
    Outcome o;
    for (const char* obs : {"zz(0,1)", "zz(0,3)"}) {
        std::vector<double> x, y;
        for (const auto& r : rows) {
            if (r.observable == obs) {
                x.push_back(r.dt);
                y.push_back(r.max_abs_error);
            }
        }
        const double s = slope(x, y);
        o.check(x.size() == dts.size() && std::abs(s - 1.0) <= 0.2, std::string(obs) + " slope " + fmt("%.3f", s));
    }
    return o;
}

Outcome thermalization() {
    Outcome o;
    for (const char* file : {"xy_chain_n4_thermal.cfg", "xy_grid_2x2_thermal.cfg"}) {
        ExperimentConfig cfg = load(file);
        cfg.reference = false;
        cfg.observables = specs({"entropy"});
        const int n = cfg.qubits();
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                cfg.observables.push_back(ObservableSpec(CorrelationObservable{i, j}));
            }
        }
        const auto series = run_experiment(cfg).series;
        const double s = series.values("entropy", method_names::reconstructed).back();
        const double target = 0.95 * n * std::log(2.0);
        double corr = 0.0;
        for (const auto& spec : cfg.observables) {
            if (spec.is_linear()) {
                corr = std::max(corr, std::abs(series.values(spec.name(), method_names::reconstructed).back()));
            }
        }
        const std::string tag = cfg.model == ExperimentConfig::Model::xy_grid ? "grid" : "chain";
        o.check(std::isfinite(s) && s >= target, tag + " S(10) = " + fmt("%.4f", s) + " >= " + fmt("%.4f", target));
        o.check(corr < 0.05, tag + " max |zz(i,j)| = " + fmt("%.4f", corr));
    }
    return o;
}

Outcome mbl() {
    Outcome o;
    {
        const ExperimentConfig cfg = load("heisenberg_n6_gamma0.cfg");
        const auto series = run_experiment(cfg).series;
        const auto t = series.times("imbalance", method_names::adjoint_direct);
        const auto imb = series.values("imbalance", method_names::adjoint_direct);
        // Window means over [100, 150) and [150, 200], and the least-squares
        // slope over [100, 200].
        double all = 0, first = 0, second = 0;
        int n_all = 0, n_first = 0, n_second = 0;
        std::vector<double> tw, vw;
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (t[k] < 100.0 - 1e-9) {
                continue;
            }
            all += imb[k];
            ++n_all;
            tw.push_back(t[k]);
            vw.push_back(imb[k]);
            if (t[k] < 150.0 - 1e-9) {
                first += imb[k];
                ++n_first;
            } else {
                second += imb[k];
                ++n_second;
            }
        }
        all /= n_all;
        first /= n_first;
        second /= n_second;
        const double tm = std::accumulate(tw.begin(), tw.end(), 0.0) / tw.size();
        const double vm = std::accumulate(vw.begin(), vw.end(), 0.0) / vw.size();
        double num = 0, den = 0;
        for (std::size_t k = 0; k < tw.size(); ++k) {
            num += (tw[k] - tm) * (vw[k] - vm);
            den += (tw[k] - tm) * (tw[k] - tm);
        }
        const double drift = 100.0 * num / den;
        o.check(all >= 0.5, "gamma=0 mean I[100,200] = " + fmt("%.4f", all) + " over " +
                                std::to_string(cfg.disorder_repeats) + " realizations");
        o.check(second >= first - 0.05 && drift >= -0.05,
                "no decay: halves " + fmt("%.4f", first) + "/" + fmt("%.4f", second) + ", slope*100 " +
                    fmt("%.4f", drift));
    }
    {
        const ExperimentConfig cfg = load("heisenberg_n6_gamma0.1.cfg");
        const auto series = run_experiment(cfg).series;
        const double imb = series.values("imbalance", method_names::adjoint_direct).back();
        const double s = series.values("entropy(0,1,2)", method_names::adjoint_direct).back();
        const double target = 0.9 * 3.0 * std::log(2.0);
        o.check(std::abs(imb) < 0.1, "gamma=0.1 |I(200)| = " + fmt("%.4f", std::abs(imb)));
        o.check(s >= target, "S_L(200) = " + fmt("%.4f", s) + " >= " + fmt("%.4f", target));
    }
    return o;
}

Outcome sampler_statistics() {
    const int n = 2;
    const int m = 20;
    const double dt = 0.05;
    const AdjointChannel ch = build_adjoint(build_xy(Geometry::chain(n), -1.0), build_uniform_dephasing(n, 0.1), dt);
    const StateVector psi = StateVector::product(std::vector<double>{0.7, 2.1});
    const std::vector<PauliString> obs = {PauliString("XI"), PauliString("ZI"), PauliString("YX")};

    const DensityMatrix rho0 = DensityMatrix::pure(psi);
    std::vector<DensityMatrix> exact_states = {rho0};
    for (auto& s : iterate_adjoint(ch, rho0, m)) {
        exact_states.push_back(std::move(s));
    }
    std::vector<std::vector<double>> exact(exact_states.size());
    for (std::size_t s = 0; s < exact_states.size(); ++s) {
        for (const auto& p : obs) {
            exact[s].push_back(expectation(exact_states[s], p));
        }
    }

    const int replicates = 48;
    const std::vector<double> ms = {1e3, 1e4, 1e5};
    std::vector<double> rms;
    bool within = true;
    double worst_z = 0.0;
    for (double mm : ms) {
        const auto count = static_cast<std::uint64_t>(mm);
        double sq = 0.0;
        int terms = 0;
        for (int r = 0; r < replicates; ++r) {
            const auto batch = sample_trajectories(ch, psi, m, count, 1000 * count + r, obs);
            for (int k = 0; k < batch.observables(); ++k) {
                const double e = batch.mean(m, k) - exact[m][k];
                sq += e * e;
                ++terms;
            }
            if (r != 0) {
                continue;
            }
            for (int s = 1; s <= m; ++s) {
                for (int k = 0; k < batch.observables(); ++k) {
                    const double diff = std::abs(batch.mean(s, k) - exact[s][k]);
                    const double se = batch.stderr_of_mean(s, k);
                    if (se == 0.0) {
                        within = within && diff <= 1e-12;
                        continue;
                    }
                    worst_z = std::max(worst_z, diff / se);
                    within = within && diff <= 4.0 * se;
                }
            }
        }
        rms.push_back(std::sqrt(sq / terms));
    }
    const double s = slope(ms, rms);
    Outcome o;
    o.check(std::abs(s + 0.5) <= 0.1, "RMS error slope " + fmt("%.3f", s) + " (" + fmt("%.2e", rms[0]) + ", " +
                                          fmt("%.2e", rms[1]) + ", " + fmt("%.2e", rms[2]) + ")");
    o.check(within, "largest |mean - exact|/sigma = " + fmt("%.2f", worst_z) + " <= 4");
    return o;
}

Outcome structural_invariants() {
    Outcome o;
    std::mt19937_64 rng(2026);

    {
        const int n = 3;
        const AdjointChannel ch =
            build_adjoint(build_xy(Geometry::chain(n), -1.0), build_uniform_dephasing(n, 0.3), 0.05);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const Matrix rho = oracle::random_density(n, rng);
            worst = std::max(worst, std::abs(apply_adjoint(ch, rho).trace().real() - 1.0));
        }
        o.check(worst <= 1e-12, "trace(F rho) - 1 <= " + fmt("%.1e", worst));
    }

    {
        double worst = 0.0;
        for (long m : {1L, 10L, 1000L, 100000L}) {
            for (double a : {1e-3, 0.005, 0.05, 0.5}) {
                const auto w = binomial_weights(m, a, 1.0);
                CompensatedSum total;
                for (double v : w.w) {
                    total.add(v);
                }
                worst = std::max(worst, std::abs(total.value() - 1.0));
            }
        }
        o.check(worst <= 1e-12, "binomial normalization to m=1e5: " + fmt("%.1e", worst));
    }

    {
        // Exact history rho_0..rho_m, its binomial mixture, and recovery of rho_m.
        const int n = 2;
        const long m = 25;
        const double rate = 0.4;
        const double dt = 0.05;
        std::vector<Matrix> history;
        for (long x = 0; x <= m; ++x) {
            history.push_back(oracle::random_density(n, rng));
        }
        auto ledger = ReconstructionLedger::for_states(DensityMatrix::validated(history[0]), rate, dt, 0.0);
        double worst = 0.0;
        for (long k = 1; k <= m; ++k) {
            const long double p = static_cast<long double>(rate * dt) / (1.0L + rate * dt);
            Matrix adj = Matrix::Zero(history[0].rows(), history[0].cols());
            for (long x = 0; x <= k; ++x) {
                adj += static_cast<double>(oracle::binomial_pmf(k, x, p)) * history[static_cast<std::size_t>(x)];
            }
            reconstruct_state(DensityMatrix::unchecked(adj), ledger, k);
            worst = std::max(worst, oracle::max_abs(ledger.state(static_cast<std::size_t>(k)).matrix() -
                                                    history[static_cast<std::size_t>(k)]));
        }
        o.check(worst <= 1e-9, "ledger inversion " + fmt("%.1e", worst));
    }

    {
        const int n = 4;
        const OperatorMatrix mz = total_magnetization(n);
        const DensityMatrix rho0 = DensityMatrix::pure(StateVector::basis("0110"));
        const AdjointChannel ch =
            build_adjoint(build_xy(Geometry::chain(n), -1.0), build_uniform_dephasing(n, 0.1), 0.05);
        const std::vector<ObservableSpec> obs = {ObservableSpec(PauliObservable{PauliString("ZIII")})};
        auto ledger = ReconstructionLedger::for_states(rho0, ch.total_rate(), ch.dt());
        DensityMatrix f = rho0;
        double worst = 0.0;
        for (long k = 1; k <= 100; ++k) {
            f = apply_adjoint(ch, f);
            const DensityMatrix rho = reconstruct_state(f, ledger, k);
            worst = std::max(worst, std::abs(expectation(rho, mz) - expectation(rho0, mz)));
        }
        o.check(worst <= 1e-7, "magnetization drift " + fmt("%.1e", worst));
    }

    {
        double worst = 0.0;
        const int n = 4;
        for (const std::vector<int>& keep :
             std::vector<std::vector<int>>{{0}, {3}, {0, 1}, {1, 3}, {0, 2, 3}, {0, 1, 2, 3}}) {
            const Matrix rho = oracle::random_density(n, rng);
            const DensityMatrix got = partial_trace(DensityMatrix::validated(rho), keep);
            worst = std::max(worst, oracle::max_abs(got.matrix() - oracle::partial_trace(rho, n, keep)));
        }
        o.check(worst <= 1e-12, "partial trace vs oracle " + fmt("%.1e", worst));
    }

    {
        ExperimentConfig cfg = load("xy_chain_n2_trajectories.cfg");
        auto csv = [&] {
            std::ostringstream os;
            run_experiment(cfg).series.write_csv(os);
            return os.str();
        };
        const std::string a = csv();
        const std::string b = csv();
        cfg.sampler.seed += 1;
        const std::string c = csv();
        o.check(a == b && a != c, "trajectory CSV byte-identical under a fixed seed");
    }
    return o;
}

Outcome shared_steady_state() {
    const ExperimentConfig cfg = load("xy_chain_n4_thermal.cfg");
    const MethodComparison cmp = compare_methods(cfg);
    const double defect = cmp.steady_state_defect.back();
    double gap = 0.0;
    for (const auto& d : cmp.deviations) {
        gap = std::max(gap, d.final_gap);
    }
    Outcome o;
    o.check(defect < 1e-3, "steady_state_defect(t=10) = " + fmt("%.3e", defect) + " < 1e-3");
    o.check(gap < 1e-2, "max |reconstructed - adjoint_direct| at t=10 = " + fmt("%.3e", gap) + " < 1e-2");
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    // Optional arguments select criteria by number; all run by default.
    std::vector<int> only;
    for (int k = 1; k < argc; ++k) {
        only.push_back(std::atoi(argv[k]));
    }
    const std::vector<Criterion> criteria = {
        {1, "analytic dephasing", 1.0, analytic_dephasing},
        {2, "oracle equivalence", 30.0, oracle_equivalence},
        {3, "convergence order", 300.0, convergence_order},
        {4, "thermalization", 120.0, thermalization},
        {5, "MBL imbalance and entropy", 600.0, mbl},
        {6, "sampler statistics", 120.0, sampler_statistics},
        {7, "structural invariants", 60.0, structural_invariants},
        {8, "shared steady state", 60.0, shared_steady_state},
    };
    int failures = 0;
    int ran = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) {
            continue;
        }
        ++ran;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs >= c.budget_seconds) {
            o.pass = false;
            o.detail += "; runtime over budget";
        }
        std::printf("%s criterion %d (%s): %s [%.2f s, budget %.0f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                    o.detail.c_str(), secs, c.budget_seconds);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %d criteria passed\n", ran - failures, ran);
    return failures == 0 ? 0 : 1;
}
