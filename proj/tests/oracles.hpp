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

// Independent dense reference implementations used as test oracles. They are
// deliberately naive: Kronecker products, explicit index loops and textbook
// formulas, sharing no code with the library kernels.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
using V = Eigen::VectorXcd;

inline M pauli2(char c) {
    M p(2, 2);
    switch (c) {
        case 'I': p << 1, 0, 0, 1; break;
        case 'X': p << 0, 1, 1, 0; break;
        case 'Y': p << 0, C(0, -1), C(0, 1), 0; break;
        case 'Z': p << 1, 0, 0, -1; break;
        default: throw std::invalid_argument("bad Pauli letter");
    }
    return p;
}

/// Site 0 is the leftmost Kronecker factor.
inline M kron_pauli(const std::string& s) {
    M out = M::Identity(1, 1);
    for (char c : s) {
        M next = Eigen::kroneckerProduct(out, pauli2(c)).eval();
        out = next;
    }
    return out;
}

inline std::string single(int n, int site, char c) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(site)] = c;
    return s;
}

inline std::string pair(int n, int i, int j, char c) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(i)] = c;
    s[static_cast<std::size_t>(j)] = c;
    return s;
}

/// H = -J sum_bonds (XX + YY) on an open chain.
inline M xy_chain(int n, double j) {
    const long d = 1L << n;
    M h = M::Zero(d, d);
    for (int i = 0; i + 1 < n; ++i) {
        h -= j * (kron_pauli(pair(n, i, i + 1, 'X')) + kron_pauli(pair(n, i, i + 1, 'Y')));
    }
    return h;
}

inline M commutator(const M& a, const M& b) { return a * b - b * a; }

struct Lindblad {
    M h;
    std::vector<M> jumps;
    std::vector<double> rates;

    M rhs(const M& rho) const {
        M out = C(0, -1) * commutator(h, rho);
        for (std::size_t k = 0; k < jumps.size(); ++k) {
            const M& l = jumps[k];
            const M ldl = l.adjoint() * l;
            out += rates[k] * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
        }
        return out;
    }

    M rk4_step(const M& rho, double dt) const {
        const M k1 = rhs(rho);
        const M k2 = rhs(rho + 0.5 * dt * k1);
        const M k3 = rhs(rho + 0.5 * dt * k2);
        const M k4 = rhs(rho + dt * k3);
        return rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    /// States at t = 0, dt, ..., steps*dt using `sub` RK4 substeps each.
    std::vector<M> evolve(const M& rho0, double dt, int steps, int sub) const {
        std::vector<M> out{rho0};
        M rho = rho0;
        for (int s = 0; s < steps; ++s) {
            for (int k = 0; k < sub; ++k) {
                rho = rk4_step(rho, dt / sub);
            }
            out.push_back(rho);
        }
        return out;
    }
};

inline Lindblad dephased(const M& h, int n, double gamma) {
    Lindblad l{h, {}, {}};
    for (int i = 0; i < n; ++i) {
        l.jumps.push_back(kron_pauli(single(n, i, 'Z')));
        l.rates.push_back(gamma);
    }
    return l;
}

/// Adjoint channel written out from its Kraus form.
inline M adjoint_step(const M& rho, const M& h, const std::vector<M>& jumps, const std::vector<double>& rates,
                      double dt) {
    Eigen::SelfAdjointEigenSolver<M> es(h);
    V phases(es.eigenvalues().size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
        phases[k] = std::exp(C(0, -dt * es.eigenvalues()[k]));
    }
    const M u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    double total = 0.0;
    M out = u * rho * u.adjoint();
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        out += dt * rates[k] * jumps[k] * rho * jumps[k].adjoint();
        total += rates[k];
    }
    return out / (1.0 + total * dt);
}

/// Reduced state on sorted `keep` by explicit index loops.
inline M partial_trace(const M& rho, int n, const std::vector<int>& keep) {
    std::vector<int> trace_out;
    for (int q = 0; q < n; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
            trace_out.push_back(q);
        }
    }
    const int k = static_cast<int>(keep.size());
    const long dk = 1L << k;
    const long de = 1L << trace_out.size();
    auto compose = [&](long a, long e) {
        long idx = 0;
        for (int t = 0; t < k; ++t) {
            const long bit = (a >> (k - 1 - t)) & 1;
            idx |= bit << (n - 1 - keep[static_cast<std::size_t>(t)]);
        }
        const int r = static_cast<int>(trace_out.size());
        for (int t = 0; t < r; ++t) {
            const long bit = (e >> (r - 1 - t)) & 1;
            idx |= bit << (n - 1 - trace_out[static_cast<std::size_t>(t)]);
        }
        return idx;
    };
    M out = M::Zero(dk, dk);
    for (long a = 0; a < dk; ++a) {
        for (long b = 0; b < dk; ++b) {
            C s = 0.0;
            for (long e = 0; e < de; ++e) {
                s += rho(compose(a, e), compose(b, e));
            }
            out(a, b) = s;
        }
    }
    return out;
}

inline M random_density(int n, std::mt19937_64& rng, int rank = 0) {
    const long d = 1L << n;
    const long r = rank > 0 ? rank : d;
    std::normal_distribution<double> g;
    M a(d, r);
    for (long i = 0; i < d; ++i) {
        for (long j = 0; j < r; ++j) {
            a(i, j) = C(g(rng), g(rng));
        }
    }
    M rho = a * a.adjoint();
    return rho / rho.trace().real();
}

inline V random_state(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    V v(1L << n);
    for (auto& x : v) {
        x = C(g(rng), g(rng));
    }
    return v / v.norm();
}

inline double max_abs(const M& a) { return a.cwiseAbs().maxCoeff(); }

inline double entropy(const M& rho) {
    Eigen::SelfAdjointEigenSolver<M> es(rho);
    double s = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double l = es.eigenvalues()[k];
        if (l > 1e-14) {
            s -= l * std::log(l);
        }
    }
    return s;
}

/// C(m, x) p^{m-x} (1-p)^x in long double log space.
inline long double binomial_pmf(long m, long x, long double p) {
    const long double lg = std::lgamma(static_cast<long double>(m) + 1) -
                           std::lgamma(static_cast<long double>(x) + 1) -
                           std::lgamma(static_cast<long double>(m - x) + 1);
    return std::exp(lg + (m - x) * std::log(p) + x * std::log1p(-p));
}

}  // namespace oracle
