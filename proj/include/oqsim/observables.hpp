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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oqsim/operators.hpp"
#include "oqsim/pauli.hpp"

namespace oqsim {

/// Reduced density matrix on `keep` (sorted, distinct sites).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

/// -sum lambda ln lambda over eigenvalues; eigenvalues at or below
/// policy.entropy_cutoff contribute zero.
double von_neumann_entropy(const DensityMatrix& rho, const NumericPolicy& policy = default_policy());

/// <Z_i Z_j>
double correlation(const DensityMatrix& rho, int i, int j);

/// (1/n) sum_i (-1)^i <Z_i>. Requires even n.
double imbalance(const DensityMatrix& rho);

struct PauliObservable {
    PauliString string;
};
struct EntropyObservable {
    std::vector<int> sites;  // empty means the full system
};
struct ImbalanceObservable {};
struct CorrelationObservable {
    int i;
    int j;
};

/// One reported quantity. Pauli, correlation and imbalance observables are
/// linear in rho and can go through scalar reconstruction; entropy needs the
/// full state.
class ObservableSpec {
  public:
    using Kind = std::variant<PauliObservable, EntropyObservable, ImbalanceObservable, CorrelationObservable>;

    explicit ObservableSpec(Kind kind) : kind_(std::move(kind)) {}

    /// Parses "zz(0,1)", "pauli(XZII)", "entropy", "entropy(0,1,2)",
    /// "imbalance". Throws ConfigError.
    static ObservableSpec parse(std::string_view text);

    const Kind& kind() const noexcept { return kind_; }
    std::string name() const;
    bool is_linear() const noexcept { return !std::holds_alternative<EntropyObservable>(kind_); }

    /// Throws ConfigError if the observable does not fit an n-site system.
    void validate(int n) const;

    /// Linear observables as a weighted Pauli sum; std::nullopt for entropy.
    std::optional<PauliSum> as_pauli_sum(int n) const;

    double evaluate(const DensityMatrix& rho, const NumericPolicy& policy = default_policy()) const;

  private:
    Kind kind_;
};

}  // namespace oqsim
