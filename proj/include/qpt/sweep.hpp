// Copyright 2026 The qpt developers
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

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qpt/models.hpp"

namespace qpt {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2;  // number of grid points, >= 2

  double at(int k) const {
    return lo + (hi - lo) * double(k) / double(steps - 1);
  }
};

enum class SweepMetric { NonMarkovianity, TwoTime, CpDivisible };

struct SweepRow {
  double xi = 0.0;
  double kappa = 0.0;
  double value = 0.0;
};

struct SweepResult {
  SweepMetric metric;
  Range xi, kappa;
  double dt = 0.3;
  int n = 6;
  std::vector<SweepRow> rows;  // kappa fastest, one row per grid point
};

inline int sweep_workers() {
  if (const char* env = std::getenv("PT_THREADS")) {
    const int k = std::atoi(env);
    if (k > 0) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Evaluate a metric on a (xi, kappa) grid. Grid points are independent and
/// are distributed over a worker pool; rows come back in grid order.
inline SweepResult run_sweep(SweepMetric metric, Range xi, Range kappa,
                             double dt = 0.3, int n = 6, int workers = 0) {
  if (xi.steps < 2 || kappa.steps < 2)
    throw Error("run_sweep: ranges need at least 2 steps");
  SweepResult res{metric, xi, kappa, dt, n, {}};
  const long total = static_cast<long>(xi.steps) * kappa.steps;
  res.rows.resize(total);

  const auto eval = [&](long idx) {
    const int i = static_cast<int>(idx) / kappa.steps;
    const int k = static_cast<int>(idx) % kappa.steps;
    SweepRow row{xi.at(i), kappa.at(k), 0.0};
    switch (metric) {
      case SweepMetric::TwoTime:
        row.value = two_time_non_markovianity(row.xi, row.kappa);
        break;
      case SweepMetric::CpDivisible:
        row.value = cp_divisible(row.xi, row.kappa) ? 1.0 : 0.0;
        break;
      case SweepMetric::NonMarkovianity: {
        TwoQubitModel m{row.xi, row.kappa, dt, n, std::nullopt};
        row.value = non_markovianity(two_qubit_process_tensor(m));
        break;
      }
    }
    res.rows[idx] = row;
  };

  if (workers <= 0) workers = sweep_workers();
  workers = std::min<long>(workers, total);
  if (workers <= 1) {
    for (long idx = 0; idx < total; ++idx) eval(idx);
  } else {
    // The sigma convention cache must be resolved before threads race on it.
    if (metric == SweepMetric::NonMarkovianity) two_qubit_convention();
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (long idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1))
          eval(idx);
      });
    for (auto& t : pool) t.join();
  }
  return res;
}

/// CSV with header xi,kappa,value; infinities spelled "inf".
inline std::string sweep_to_csv(const SweepResult& res) {
  std::ostringstream os;
  os << "xi,kappa,value\n";
  os.precision(12);
  for (const auto& row : res.rows) {
    os << row.xi << "," << row.kappa << ",";
    if (std::isinf(row.value))
      os << (row.value > 0 ? "inf" : "-inf");
    else if (std::isnan(row.value))
      os << "nan";
    else
      os << row.value;
    os << "\n";
  }
  return os.str();
}

}  // namespace qpt
