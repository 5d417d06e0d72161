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

#include "oqsim/observables.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace oqsim {

namespace {

// Spreads the bits of `value` onto the basis-index positions of `sites`
// (first listed site is the most significant bit of `value`).
std::uint64_t spread_bits(std::uint64_t value, std::span<const int> sites, int n) {
    std::uint64_t out = 0;
    const auto count = static_cast<int>(sites.size());
    for (int k = 0; k < count; ++k) {
        if ((value >> (count - 1 - k)) & 1U) {
            out |= std::uint64_t{1} << (n - 1 - sites[static_cast<std::size_t>(k)]);
        }
    }
    return out;
}

void check_site(int site, int n) {
    if (site < 0 || site >= n) {
        throw ConfigError("site " + std::to_string(site) + " is out of range for " + std::to_string(n) + " qubits");
    }
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
    const int n = rho.qubits();
    if (keep.empty()) {
        throw DimensionError("partial_trace needs at least one kept site");
    }
    for (std::size_t k = 0; k < keep.size(); ++k) {
        if (keep[k] < 0 || keep[k] >= n || (k > 0 && keep[k] <= keep[k - 1])) {
            throw DimensionError("kept sites must be sorted, distinct and within [0, n)");
        }
    }
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (!std::binary_search(keep.begin(), keep.end(), q)) {
            traced.push_back(q);
        }
    }
    const std::uint64_t dk = std::uint64_t{1} << keep.size();
    const std::uint64_t dt = std::uint64_t{1} << traced.size();
    std::vector<std::uint64_t> kept_index(dk), traced_index(dt);
    for (std::uint64_t k = 0; k < dk; ++k) {
        kept_index[k] = spread_bits(k, keep, n);
    }
    for (std::uint64_t t = 0; t < dt; ++t) {
        traced_index[t] = spread_bits(t, traced, n);
    }
    const Matrix& m = rho.matrix();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::uint64_t c = 0; c < dk; ++c) {
        for (std::uint64_t r = 0; r < dk; ++r) {
            Complex acc = 0.0;
            for (std::uint64_t t = 0; t < dt; ++t) {
                acc += m(static_cast<Eigen::Index>(kept_index[r] | traced_index[t]),
                         static_cast<Eigen::Index>(kept_index[c] | traced_index[t]));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return DensityMatrix::unchecked(std::move(out));
}

double von_neumann_entropy(const DensityMatrix& rho, const NumericPolicy& policy) {
    const Matrix herm = 0.5 * (rho.matrix() + rho.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue solver failed in entropy");
    }
    double s = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double lambda = solver.eigenvalues()[k];
        if (lambda < policy.entropy_reject) {
            throw NumericError("entropy input has eigenvalue " + std::to_string(lambda));
        }
        if (lambda > policy.entropy_cutoff) {
            s -= lambda * std::log(lambda);
        }
    }
    return s;
}

double correlation(const DensityMatrix& rho, int i, int j) {
    const int n = rho.qubits();
    check_site(i, n);
    check_site(j, n);
    if (i == j) {
        throw ConfigError("correlation needs two distinct sites");
    }
    std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::I);
    letters[static_cast<std::size_t>(i)] = Pauli::Z;
    letters[static_cast<std::size_t>(j)] = Pauli::Z;
    return expectation(rho, PauliString(std::move(letters)));
}

double imbalance(const DensityMatrix& rho) {
    const int n = rho.qubits();
    if (n % 2 != 0) {
        throw ConfigError("imbalance requires an even number of sites");
    }
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += (i % 2 == 0 ? 1.0 : -1.0) * expectation(rho, PauliString::single(n, i, Pauli::Z));
    }
    return acc / n;
}

namespace {

std::vector<int> parse_int_list(std::string_view args, std::string_view text) {
    std::vector<int> out;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) {
            throw ConfigError("malformed observable '" + std::string(text) + "'");
        }
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(cur, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != cur.size()) {
            throw ConfigError("bad site index '" + cur + "' in observable '" + std::string(text) + "'");
        }
        out.push_back(v);
        cur.clear();
    };
    for (char c : args) {
        if (c == ',') {
            flush();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    flush();
    return out;
}

}  // namespace

ObservableSpec ObservableSpec::parse(std::string_view raw) {
    // Whitespace is insignificant and the kind name is case-insensitive.
    std::string cleaned;
    for (char c : raw) {
        if (c != ' ' && c != '\t') {
            cleaned.push_back(c);
        }
    }
    const auto open_paren = cleaned.find('(');
    for (std::size_t k = 0; k < std::min(open_paren, cleaned.size()); ++k) {
        cleaned[k] = static_cast<char>(std::tolower(static_cast<unsigned char>(cleaned[k])));
    }
    if (cleaned.empty()) {
        throw ConfigError("empty observable");
    }
    const std::string_view text = cleaned;
    std::string_view head = text;
    std::string_view args;
    bool has_args = false;
    if (const auto open = text.find('('); open != std::string_view::npos) {
        if (text.back() != ')') {
            throw ConfigError("malformed observable '" + std::string(text) + "'");
        }
        head = text.substr(0, open);
        args = text.substr(open + 1, text.size() - open - 2);
        has_args = true;
    }
    if (head == "imbalance" && !has_args) {
        return ObservableSpec(ImbalanceObservable{});
    }
    if (head == "entropy") {
        if (!has_args) {
            return ObservableSpec(EntropyObservable{});
        }
        std::vector<int> sites = parse_int_list(args, text);
        for (std::size_t k = 1; k < sites.size(); ++k) {
            if (sites[k] <= sites[k - 1]) {
                throw ConfigError("entropy sites must be strictly increasing in '" + std::string(text) + "'");
            }
        }
        return ObservableSpec(EntropyObservable{std::move(sites)});
    }
    if (head == "zz" && has_args) {
        const std::vector<int> ij = parse_int_list(args, text);
        if (ij.size() != 2 || ij[0] == ij[1]) {
            throw ConfigError("zz takes two distinct sites: '" + std::string(text) + "'");
        }
        return ObservableSpec(CorrelationObservable{ij[0], ij[1]});
    }
    if (head == "pauli" && has_args) {
        try {
            return ObservableSpec(PauliObservable{PauliString(args)});
        } catch (const DimensionError& e) {
            throw ConfigError(std::string("bad Pauli string in '") + std::string(text) + "': " + e.what());
        }
    }
    throw ConfigError("unknown observable '" + std::string(text) + "'");
}

std::string ObservableSpec::name() const {
    struct Visitor {
        std::string operator()(const PauliObservable& o) const { return "pauli(" + o.string.str() + ")"; }
        std::string operator()(const EntropyObservable& o) const {
            if (o.sites.empty()) {
                return "entropy";
            }
            std::string s = "entropy(";
            for (std::size_t k = 0; k < o.sites.size(); ++k) {
                s += (k ? "," : "") + std::to_string(o.sites[k]);
            }
            return s + ")";
        }
        std::string operator()(const ImbalanceObservable&) const { return "imbalance"; }
        std::string operator()(const CorrelationObservable& o) const {
            return "zz(" + std::to_string(o.i) + "," + std::to_string(o.j) + ")";
        }
    };
    return std::visit(Visitor{}, kind_);
}

void ObservableSpec::validate(int n) const {
    if (const auto* p = std::get_if<PauliObservable>(&kind_)) {
        if (p->string.size() != n) {
            throw ConfigError("observable " + name() + " does not act on " + std::to_string(n) + " qubits");
        }
    } else if (const auto* e = std::get_if<EntropyObservable>(&kind_)) {
        for (int s : e->sites) {
            check_site(s, n);
        }
    } else if (std::holds_alternative<ImbalanceObservable>(kind_)) {
        if (n % 2 != 0) {
            throw ConfigError("imbalance requires an even number of sites, got " + std::to_string(n));
        }
    } else if (const auto* c = std::get_if<CorrelationObservable>(&kind_)) {
        check_site(c->i, n);
        check_site(c->j, n);
        if (c->i == c->j) {
            throw ConfigError("observable " + name() + " needs two distinct sites");
        }
    }
}

std::optional<PauliSum> ObservableSpec::as_pauli_sum(int n) const {
    validate(n);
    if (const auto* p = std::get_if<PauliObservable>(&kind_)) {
        return PauliSum{{1.0, p->string}};
    }
    if (std::holds_alternative<ImbalanceObservable>(kind_)) {
        PauliSum sum;
        for (int i = 0; i < n; ++i) {
            sum.push_back({(i % 2 == 0 ? 1.0 : -1.0) / n, PauliString::single(n, i, Pauli::Z)});
        }
        return sum;
    }
    if (const auto* c = std::get_if<CorrelationObservable>(&kind_)) {
        std::vector<Pauli> letters(static_cast<std::size_t>(n), Pauli::I);
        letters[static_cast<std::size_t>(c->i)] = Pauli::Z;
        letters[static_cast<std::size_t>(c->j)] = Pauli::Z;
        return PauliSum{{1.0, PauliString(std::move(letters))}};
    }
    return std::nullopt;
}

double ObservableSpec::evaluate(const DensityMatrix& rho, const NumericPolicy& policy) const {
    const int n = rho.qubits();
    validate(n);
    if (const auto* p = std::get_if<PauliObservable>(&kind_)) {
        return expectation(rho, p->string);
    }
    if (const auto* e = std::get_if<EntropyObservable>(&kind_)) {
        if (e->sites.empty() || static_cast<int>(e->sites.size()) == n) {
            return von_neumann_entropy(rho, policy);
        }
        return von_neumann_entropy(partial_trace(rho, e->sites), policy);
    }
    if (std::holds_alternative<ImbalanceObservable>(kind_)) {
        return imbalance(rho);
    }
    const auto& c = std::get<CorrelationObservable>(kind_);
    return correlation(rho, c.i, c.j);
}

}  // namespace oqsim
