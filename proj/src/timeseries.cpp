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

#include "oqsim/timeseries.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <utility>

namespace oqsim {

void TimeSeries::add(double t, std::string observable, double value, std::optional<double> err, std::string method) {
    records_.push_back({t, std::move(observable), value, err, std::move(method)});
}

void TimeSeries::append(const TimeSeries& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
}

std::vector<double> TimeSeries::values(const std::string& observable, const std::string& method) const {
    std::vector<double> out;
    for (const auto& r : records_) {
        if (r.observable == observable && r.method == method) {
            out.push_back(r.value);
        }
    }
    return out;
}

std::vector<double> TimeSeries::times(const std::string& observable, const std::string& method) const {
    std::vector<double> out;
    for (const auto& r : records_) {
        if (r.observable == observable && r.method == method) {
            out.push_back(r.t);
        }
    }
    return out;
}

namespace {

// RFC 4180 quoting for fields such as "zz(0,1)".
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

std::vector<std::string> unique_in_order(const std::vector<TimeRecord>& records, std::string TimeRecord::*field) {
    std::vector<std::string> out;
    for (const auto& r : records) {
        if (std::find(out.begin(), out.end(), r.*field) == out.end()) {
            out.push_back(r.*field);
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> TimeSeries::observables() const { return unique_in_order(records_, &TimeRecord::observable); }

std::vector<std::string> TimeSeries::methods() const { return unique_in_order(records_, &TimeRecord::method); }

bool TimeSeries::times_increasing() const {
    std::map<std::pair<std::string, std::string>, double> last;
    for (const auto& r : records_) {
        const auto key = std::make_pair(r.observable, r.method);
        const auto it = last.find(key);
        if (it != last.end() && !(r.t > it->second)) {
            return false;
        }
        last[key] = r.t;
    }
    return true;
}

void TimeSeries::write_csv(std::ostream& os) const {
    os << "t,observable,value,stderr,method\n";
    char buf[64];
    for (const auto& r : records_) {
        std::snprintf(buf, sizeof buf, "%.10g", r.t);
        os << buf << ',' << csv_field(r.observable) << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.value);
        os << buf << ',';
        if (r.stderr_value) {
            std::snprintf(buf, sizeof buf, "%.17g", *r.stderr_value);
            os << buf;
        }
        os << ',' << csv_field(r.method) << '\n';
    }
}

}  // namespace oqsim
