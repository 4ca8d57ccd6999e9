// Copyright 2026 The FedSCS Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eval/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "binning/atoms.hpp"
#include "data/partition.hpp"
#include "data/synth.hpp"
#include "eval/runner.hpp"
#include "sketch/calibration.hpp"
#include "transport/sim_network.hpp"
#include "transport/stream_transport.hpp"

namespace fedscs::eval {

namespace {

bool close(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b)) + 1e-15;
}

Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(m.row(rows[i]).begin(), m.row(rows[i]).end(), out.row(i).begin());
  }
  return out;
}

gbt::GradHess take_rows(const gbt::GradHess& gh, const std::vector<std::size_t>& rows) {
  return {take_rows(gh.g, rows), take_rows(gh.h, rows)};
}

std::string first_line(const std::string& name, bool ok, const std::string& detail) {
  return std::string(ok ? "PASS " : "FAIL ") + name + (detail.empty() ? "" : ": " + detail);
}

protocol::FedRun fed_on(const data::Table& table, const std::string& clients,
                        const protocol::ServerConfig& config, transport::Transport& net) {
  const data::Partition part =
      data::partition_clients(table, data::parse_partition(clients, config.train.seed));
  std::vector<protocol::Client> parties;
  for (std::size_t c = 0; c < part.rows.size(); ++c) {
    parties.emplace_back(static_cast<protocol::ClientId>(c), table.data.subset(part.rows[c]));
  }
  protocol::FedRun run = protocol::run_training(config, parties, net);
  if (run.aborted) fail(run.error_code, run.error);
  return run;
}

protocol::FedRun fed_on(const data::Table& table, const std::string& clients,
                        const protocol::ServerConfig& config) {
  transport::SimNetwork net(config.train.seed);
  return fed_on(table, clients, config, net);
}

// Values with ties, negatives, exact zeros and heavy tails.
std::vector<double> random_stream(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  const int shape = std::uniform_int_distribution<int>(0, 4)(rng);
  std::normal_distribution<double> normal(0.0, 3.0);
  std::lognormal_distribution<double> lognormal(0.0, 1.5);
  std::uniform_int_distribution<int> ints(0, 9);
  std::uniform_real_distribution<double> uniform(-5.0, 5.0);
  for (double& x : v) {
    switch (shape) {
      case 0: x = normal(rng); break;
      case 1: x = lognormal(rng); break;
      case 2: x = ints(rng); break;
      case 3: x = uniform(rng); break;
      default: x = ints(rng) < 3 ? 0.0 : normal(rng); break;
    }
  }
  return v;
}

std::vector<double> random_hessians(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 0.25);
  std::vector<double> w(n);
  for (double& x : w) x = gbt::quantize_stat(u(rng));
  return w;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::optional<std::string> VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return c.name;
  }
  return std::nullopt;
}

std::string format_verify(const VerifyReport& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) os << first_line(c.name, c.passed, c.detail) << '\n';
  if (auto f = report.first_failure()) {
    os << "verification failed: " << *f << '\n';
  } else {
    os << "all checks passed\n";
  }
  return os.str();
}

CheckResult check_conservation(const gbt::Dataset& data, int bins, double rho, int partitions,
                               uint64_t seed) {
  CheckResult r{"conservation", true, ""};
  const std::size_t n = data.n_rows();
  const auto k = static_cast<std::size_t>(data.n_classes);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Matrix margins(n, k);
  for (double& m : margins.data()) m = noise(rng);
  gbt::GradHess gh = gbt::softmax_grad_hess(margins, data.labels);
  gbt::quantize(gh);
  const auto weights = gbt::hessian_weights(gh);
  const binning::EdgeSet edges = gbt::exact_edges(data.features, weights, bins, 1);
  const binning::AtomMap pooled = binning::aggregate_atoms(data.features, gh, edges);

  std::ostringstream why;
  if (pooled.total_count() != n) why << "atom count " << pooled.total_count() << " != " << n << "; ";
  const auto tg = pooled.total_grad();
  const auto th = pooled.total_hess();
  for (std::size_t c = 0; c < k; ++c) {
    double g = 0.0;
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      g += gh.g(i, c);
      h += gh.h(i, c);
    }
    if (!close(tg[c], g, 1e-9) || !close(th[c], h, 1e-9)) {
      why << "class " << c << " totals differ; ";
    }
  }

  const auto levels = sketch::edge_levels(bins);
  std::vector<std::vector<double>> pooled_q(data.n_features());
  for (std::size_t f = 0; f < data.n_features(); ++f) {
    sketch::DDSketch s(rho);
    for (std::size_t i = 0; i < n; ++i) s.insert(data.features(i, f), weights[i]);
    pooled_q[f] = s.quantiles(levels);
  }

  for (int p = 0; p < partitions && why.str().empty(); ++p) {
    const int clients = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<std::vector<std::size_t>> rows(static_cast<std::size_t>(clients));
    std::uniform_int_distribution<int> pick(0, clients - 1);
    for (std::size_t i = 0; i < n; ++i) rows[static_cast<std::size_t>(pick(rng))].push_back(i);

    std::vector<binning::AtomMap> maps;
    for (const auto& part : rows) {
      maps.push_back(binning::aggregate_atoms(take_rows(data.features, part), take_rows(gh, part), edges));
    }
    const binning::AtomMap merged = binning::merge_atom_maps(maps);
    bool same = merged.keys == pooled.keys && merged.counts == pooled.counts;
    for (std::size_t i = 0; same && i < merged.grad.size(); ++i) {
      same = close(merged.grad[i], pooled.grad[i], 1e-9) && close(merged.hess[i], pooled.hess[i], 1e-9);
    }
    if (!same) why << "partition " << p << ": merged atoms differ from pooled; ";

    for (std::size_t f = 0; f < data.n_features(); ++f) {
      sketch::DDSketch merged_sketch(rho);
      for (const auto& part : rows) {
        sketch::DDSketch s(rho);
        for (std::size_t i : part) s.insert(data.features(i, f), weights[i]);
        merged_sketch.merge(s);
      }
      const auto q = merged_sketch.quantiles(levels);
      for (std::size_t b = 0; b < q.size(); ++b) {
        if (!close(q[b], pooled_q[f][b], 1e-9)) {
          why << "partition " << p << " feature " << f << ": merged sketch quantile differs; ";
          break;
        }
      }
    }
  }
  r.detail = why.str();
  r.passed = r.detail.empty();
  if (r.passed) {
    r.detail = std::to_string(pooled.size()) + " atoms, " + std::to_string(partitions) +
               " random partitions";
  }
  return r;
}

CheckResult check_gradients(int draws, uint64_t seed) {
  CheckResult r{"gradient", true, ""};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> m(0.0, 2.0);
  double worst = 0.0;
  constexpr double kStep = 1e-5;
  for (int t = 0; t < draws; ++t) {
    const int k = std::uniform_int_distribution<int>(2, 16)(rng);
    const int y = std::uniform_int_distribution<int>(0, k - 1)(rng);
    Matrix margins(1, static_cast<std::size_t>(k));
    for (double& v : margins.data()) v = m(rng);
    const int32_t label = y;
    const gbt::GradHess gh = gbt::softmax_grad_hess(margins, std::span<const int32_t>(&label, 1));
    for (int c = 0; c < k; ++c) {
      const auto cc = static_cast<std::size_t>(c);
      Matrix up = margins;
      Matrix down = margins;
      up(0, cc) += kStep;
      down(0, cc) -= kStep;
      const double fd_g =
          (gbt::row_log_loss(up.row(0), y) - gbt::row_log_loss(down.row(0), y)) / (2 * kStep);
      const gbt::GradHess gu = gbt::softmax_grad_hess(up, std::span<const int32_t>(&label, 1));
      const gbt::GradHess gd = gbt::softmax_grad_hess(down, std::span<const int32_t>(&label, 1));
      const double fd_h = (gu.g(0, cc) - gd.g(0, cc)) / (2 * kStep);
      const double eg = std::fabs(fd_g - gh.g(0, cc)) / std::max(std::fabs(gh.g(0, cc)), 1e-3);
      const double eh = std::fabs(fd_h - gh.h(0, cc)) / std::max(std::fabs(gh.h(0, cc)), 1e-3);
      worst = std::max({worst, eg, eh});
    }
  }
  r.passed = worst <= 1e-4;
  std::ostringstream os;
  os << draws << " draws, worst relative error " << worst;
  r.detail = os.str();
  return r;
}

CheckResult check_bracketing(int streams, int bins, double alpha_target, uint64_t seed) {
  CheckResult r{"bracketing", true, ""};
  std::mt19937_64 rng(seed);
  const auto calib_values = random_stream(rng, 4000);
  const auto calib_weights = random_hessians(rng, 4000);
  const sketch::Calibration cal = sketch::calibrate_rho(calib_values, calib_weights, alpha_target, bins);
  const auto levels = sketch::edge_levels(bins);
  double worst_alpha = 0.0;
  int violations = 0;
  for (int s = 0; s < streams; ++s) {
    const auto n = static_cast<std::size_t>(std::uniform_int_distribution<int>(200, 3000)(rng));
    const auto values = random_stream(rng, n);
    const auto weights = random_hessians(rng, n);
    sketch::DDSketch sketch(cal.rho);
    for (std::size_t i = 0; i < n; ++i) sketch.insert(values[i], weights[i]);
    const sketch::ExactWeightedQuantiler exact(values, weights);
    if (exact.empty()) continue;
    const auto edges = sketch.split_points(levels);
    const double alpha = sketch.rank_error_bound(levels);
    worst_alpha = std::max(worst_alpha, alpha);
    const double total = exact.total_weight();
    const double slack = 1e-12 * total;
    for (std::size_t b = 0; b < edges.size(); ++b) {
      if (exact.mass_below(edges[b]) > (levels[b] + alpha) * total + slack ||
          exact.mass_at_or_below(edges[b]) < (levels[b] - alpha) * total - slack) {
        ++violations;
      }
    }
  }
  r.passed = violations == 0;
  std::ostringstream os;
  os << streams << " streams at rho " << cal.rho << " (calibration target "
     << (cal.satisfied ? "met" : "not met, finest rho used") << "), max certified alpha " << worst_alpha
     << ", violations " << violations;
  r.detail = os.str();
  return r;
}

CheckResult check_prefix_mass(const gbt::Dataset& train, const protocol::FedRun& fed, int bins) {
  CheckResult r{"prefix-mass", true, ""};
  const auto levels = sketch::edge_levels(bins);
  Matrix margins(train.n_rows(), static_cast<std::size_t>(train.n_classes),
                 fed.ensemble.base_margin);
  std::size_t applied = 0;
  double worst_ratio = 0.0;
  int violations = 0;
  int checked = 0;
  for (const protocol::RoundRecord& rec : fed.records) {
    while (applied + 1 < rec.round) {
      gbt::accumulate_round(fed.ensemble.rounds[applied], fed.ensemble.eta, train.features, margins);
      ++applied;
    }
    if (rec.merged_sketches.empty()) continue;  // exact summaries: alpha = 0 by construction
    gbt::GradHess gh = gbt::softmax_grad_hess(margins, train.labels);
    gbt::quantize(gh);
    const auto weights = gbt::hessian_weights(gh);
    std::vector<double> column(train.n_rows());
    for (std::size_t f = 0; f < train.n_features(); ++f) {
      for (std::size_t i = 0; i < train.n_rows(); ++i) column[i] = train.features(i, f);
      const sketch::ExactWeightedQuantiler exact(column, weights);
      const sketch::DDSketch& sk = rec.merged_sketches[f];
      if (exact.empty() || sk.empty()) continue;
      const auto approx = sk.split_points(levels);
      const auto ideal = exact.quantiles(levels);
      const double alpha = sk.rank_error_bound(levels);
      const double total = exact.total_weight();
      for (std::size_t b = 0; b < levels.size(); ++b) {
        const double diff = std::fabs(exact.mass_below(approx[b]) - exact.mass_below(ideal[b]));
        ++checked;
        if (diff > alpha * total + 1e-12 * total) ++violations;
        if (alpha > 0.0) worst_ratio = std::max(worst_ratio, diff / (alpha * total));
      }
    }
  }
  r.passed = violations == 0;
  std::ostringstream os;
  os << checked << " prefix masses, worst |diff|/(alpha*H) " << worst_ratio << ", violations "
     << violations;
  r.detail = os.str();
  return r;
}

CheckResult check_equivalence(const gbt::Ensemble& central, const gbt::Ensemble& fed,
                              double rel_tol) {
  const auto diff = gbt::first_divergence(central, fed, rel_tol);
  return {"central-equivalence", !diff.has_value(), diff ? *diff : "identical"};
}

VerifyReport verify(const RunConfig& config) {
  config.validate();
  data::BlobSpec spec;
  spec.rows = 1200;
  spec.features = 6;
  spec.classes = 4;
  spec.discrete = 2;
  spec.spread = 2.0;
  spec.seed = config.train.seed;
  const data::Table table = data::make_blobs(spec);
  const gbt::Dataset& data = table.data;
  const int bins = config.train.bins;

  protocol::ServerConfig server = server_config(config, data.n_classes);
  protocol::ServerConfig exact = server;
  exact.kind = protocol::SketchKind::kExact;

  VerifyReport report;
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      CheckResult c = fn();
      c.name = name;
      report.checks.push_back(std::move(c));
    } catch (const Error& e) {
      report.checks.push_back({name, false, std::string(error_code_name(e.code())) + ": " + e.what()});
    }
  };

  guarded("conservation", [&] { return check_conservation(data, bins, config.rho, 50, config.train.seed); });
  guarded("gradient", [&] { return check_gradients(100, config.train.seed); });
  guarded("bracketing", [&] { return check_bracketing(100, bins, 0.01, config.train.seed); });

  const gbt::CentralRun central = gbt::train_central(data, config.train);
  guarded("objective-agreement", [&] {
    const protocol::FedRun fed = fed_on(table, "iid:4", exact);
    double worst = 0.0;
    bool ok = fed.objective.size() == central.objective.size();
    for (std::size_t t = 0; ok && t < fed.objective.size(); ++t) {
      const double a = fed.objective[t];
      const double b = central.objective[t];
      ok = close(a, b, 1e-12);
      worst = std::max(worst, std::fabs(a - b));
    }
    std::ostringstream os;
    os << "max |J_fed - J_central| = " << worst;
    return CheckResult{"", ok, os.str()};
  });
  guarded("central-equivalence", [&] {
    for (const char* clients : {"iid:1", "iid:2", "iid:8", "skew:4:0.5"}) {
      const protocol::FedRun fed = fed_on(table, clients, exact);
      CheckResult c = check_equivalence(central.ensemble, fed.ensemble, 1e-12);
      if (!c.passed) {
        c.detail = std::string(clients) + ": " + c.detail;
        return c;
      }
    }
    return CheckResult{"", true, "identical for iid:1, iid:2, iid:8, skew:4:0.5"};
  });
  guarded("prefix-mass", [&] {
    return check_prefix_mass(data, fed_on(table, "iid:4", server), bins);
  });
  guarded("determinism", [&] {
    transport::SimNetwork codec(config.train.seed);
    transport::SimNetwork direct(config.train.seed + 1, {0.01, 0.05}, false);
    transport::StreamTransport stream(7);
    const protocol::FedRun a = fed_on(table, "id", server, codec);
    const protocol::FedRun b = fed_on(table, "id", server, direct);
    const protocol::FedRun c = fed_on(table, "id", server, stream);
    transport::SimNetwork codec2(config.train.seed);
    const protocol::FedRun d = fed_on(table, "id", server, codec2);
    const bool ok = a.ensemble == b.ensemble && a.ensemble == c.ensemble && a.ensemble == d.ensemble &&
                    a.objective == b.objective && a.objective == c.objective &&
                    a.objective == d.objective && codec.log() == codec2.log();
    return CheckResult{"", ok,
                       ok ? "bit-identical across codec, direct and byte-stream transports"
                          : "runs differ"};
  });
  return report;
}

}  // namespace fedscs::eval
