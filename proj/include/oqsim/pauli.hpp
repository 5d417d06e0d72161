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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oqsim/common.hpp"

namespace oqsim {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// An n-qubit tensor product over {I, X, Y, Z}.
///
/// Qubit 0 is the leftmost Kronecker factor, i.e. the most significant bit
/// of a basis-state index. Internally the string is kept in the symplectic
/// form P = i^{#Y} X^x Z^z, so that P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>.
class PauliString {
  public:
    explicit PauliString(std::string_view letters);
    explicit PauliString(std::vector<Pauli> letters);

    /// Identity everywhere except `p` at `site`.
    static PauliString single(int n, int site, Pauli p);
    static PauliString identity(int n);

    int size() const noexcept { return static_cast<int>(letters_.size()); }
    Pauli operator[](int site) const { return letters_.at(static_cast<std::size_t>(site)); }
    std::string str() const;

    std::uint64_t x_mask() const noexcept { return x_mask_; }
    std::uint64_t z_mask() const noexcept { return z_mask_; }
    int y_count() const noexcept { return y_count_; }
    bool is_identity() const noexcept { return x_mask_ == 0 && z_mask_ == 0; }

    friend bool operator==(const PauliString& a, const PauliString& b) { return a.letters_ == b.letters_; }

  private:
    void index();

    std::vector<Pauli> letters_;
    std::uint64_t x_mask_ = 0;
    std::uint64_t z_mask_ = 0;
    int y_count_ = 0;
};

/// Sign (-1)^{|b & z|} from the Z part of a Pauli string.
inline double z_sign(std::uint64_t b, std::uint64_t z_mask) noexcept {
    return (__builtin_popcountll(b & z_mask) & 1) ? -1.0 : 1.0;
}

/// i^k for integer k.
Complex i_power(int k) noexcept;

/// Dense 2^n x 2^n matrix of a Pauli string.
Matrix pauli_matrix(const PauliString& ps, const NumericPolicy& policy = default_policy());

/// P v without forming P. O(2^n).
Vector apply_pauli(const PauliString& ps, const Vector& v);

/// <v|P|v> without forming P. Imaginary part is discarded (P is Hermitian).
double pauli_expectation(const PauliString& ps, const Vector& v);

/// Adds coeff * P into `m` in place. O(2^n).
void add_pauli_term(Matrix& m, Complex coeff, const PauliString& ps);

/// Weighted sum of Pauli strings, used for linear observables such as the
/// imbalance.
struct PauliTerm {
    double coeff;
    PauliString string;
};
using PauliSum = std::vector<PauliTerm>;

double pauli_sum_expectation(std::span<const PauliTerm> sum, const Vector& v);

}  // namespace oqsim
