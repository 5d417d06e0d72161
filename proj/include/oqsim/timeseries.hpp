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
#include <ostream>
#include <string>
#include <vector>

namespace oqsim {

struct TimeRecord {
    double t;
    std::string observable;
    double value;
    std::optional<double> stderr_value;
    std::string method;
};

namespace method_names {
inline constexpr const char* reconstructed = "reconstructed";
inline constexpr const char* adjoint_direct = "adjoint_direct";
inline constexpr const char* reference = "reference";
}  // namespace method_names

/// Flat (t, observable, value, stderr, method) records.
class TimeSeries {
  public:
    void add(double t, std::string observable, double value, std::optional<double> err, std::string method);
    void append(const TimeSeries& other);

    const std::vector<TimeRecord>& records() const noexcept { return records_; }
    bool empty() const noexcept { return records_.empty(); }

    /// Values of one (observable, method) pair in insertion order.
    std::vector<double> values(const std::string& observable, const std::string& method) const;
    std::vector<double> times(const std::string& observable, const std::string& method) const;
    std::vector<std::string> observables() const;
    std::vector<std::string> methods() const;

    /// Within each (observable, method) pair, t must strictly increase.
    bool times_increasing() const;

    /// Header "t,observable,value,stderr,method", '\n' line ends, values at
    /// 17 significant digits, empty stderr when absent.
    void write_csv(std::ostream& os) const;

  private:
    std::vector<TimeRecord> records_;
};

}  // namespace oqsim
