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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace oqsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr const char* kVersion = "0.3.1";

/// Numeric thresholds shared by every module. One record so that a run's
/// metadata can state exactly which tolerances were in force.
struct NumericPolicy {
    double structural_tol = 1e-10;   // hermiticity, unitarity, state norm
    double physical_tol = 1e-8;      // trace of reconstructed states, imaginary residues
    double psd_tol = -1e-8;          // min eigenvalue accepted as PSD for a DensityMatrix
    double psd_abort = -1e-6;        // reference integrator aborts below this
    double entropy_cutoff = 1e-14;   // eigenvalues at or below contribute zero to S
    double entropy_reject = -1e-6;
    int max_qubits = 14;
};

const NumericPolicy& default_policy();

enum class ErrorCategory { config = 2, memory = 3, numeric = 4, io = 5, dimension = 6, usage = 7 };

/// Base of all library errors. The category doubles as the CLI exit code.
class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}
    ErrorCategory category() const noexcept { return category_; }

  private:
    ErrorCategory category_;
};

class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string& what) : Error(ErrorCategory::dimension, what) {}
};

class NumericError : public Error {
  public:
    explicit NumericError(const std::string& what, long step = -1)
        : Error(ErrorCategory::numeric, step >= 0 ? what + " (step " + std::to_string(step) + ")" : what),
          step_(step) {}
    long step() const noexcept { return step_; }

  private:
    long step_;
};

class ConfigError : public Error {
  public:
    ConfigError(const std::string& what, int line = 0)
        : Error(ErrorCategory::config, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

  private:
    int line_;
};

class MemoryGuardError : public Error {
  public:
    explicit MemoryGuardError(const std::string& what) : Error(ErrorCategory::memory, what) {}
};

class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

inline std::size_t dim_for_qubits(int n) { return std::size_t{1} << n; }

/// Returns n such that 2^n == dim, or throws.
int qubits_for_dim(std::size_t dim);

/// Largest entrywise modulus.
double max_abs(const Matrix& a);

/// Neumaier-compensated accumulator.
class CompensatedSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace oqsim
