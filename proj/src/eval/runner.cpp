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

#include "eval/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <sstream>

#include "data/synth.hpp"
#include "transport/sim_network.hpp"

namespace fedscs::eval {

namespace {

std::vector<std::size_t> intersect(const std::vector<std::size_t>& a,
                                   const std::vector<std::size_t>& b) {
  std::vector<std::size_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Confusion score(const gbt::Ensemble& model, const gbt::Dataset& data) {
  const Matrix margins = gbt::predict_margins(model, data);
  const auto pred = gbt::predict_labels(margins);
  return confusion(data.labels, pred, model.n_classes);
}

constexpr const char* kClientNote =
    "per-client rows score the global model on each client's local validation slice";

}  // namespace

PreparedData prepare_data(const RunConfig& config) {
  PreparedData out;
  if (config.data.empty()) {
    data::BlobSpec spec = config.synth;
    spec.seed = config.train.seed;
    out.table = data::make_blobs(spec);
  } else {
    data::CsvSchema schema{config.label_column, config.id_column};
    out.table = data::load_csv(config.data, schema);
  }
  data::SplitSpec split{config.train_fraction, config.train.seed, config.split_by_id};
  out.split = data::hash_split(out.table, split);
  require(!out.split.train.empty(), ErrorCode::kConfig, "hash split left no training rows");
  out.train = out.table.subset(out.split.train);
  out.valid = out.table.subset(out.split.valid);
  return out;
}

ClientSlices client_slices(const PreparedData& prepared, const RunConfig& config) {
  const data::PartitionSpec spec = data::parse_partition(config.clients, config.train.seed);
  const data::Partition part = data::partition_clients(prepared.table, spec);
  ClientSlices out;
  out.names = part.names;
  for (const auto& rows : part.rows) {
    out.train.push_back(intersect(rows, prepared.split.train));
    out.valid.push_back(intersect(rows, prepared.split.valid));
  }
  return out;
}

protocol::ServerConfig server_config(const RunConfig& config, int n_classes) {
  protocol::ServerConfig s;
  s.train = config.train;
  s.n_classes = n_classes;
  s.rho = config.rho;
  s.kind = config.exact_sketch ? protocol::SketchKind::kExact : protocol::SketchKind::kDDSketch;
  s.cohort_fraction = config.cohort_fraction;
  s.barrier_timeout =
      config.barrier_timeout > 0.0 ? config.barrier_timeout : std::numeric_limits<double>::infinity();
  s.fault = config.fault;
  return s;
}

protocol::FedRun train_federated(const data::Table& table, const ClientSlices& slices,
                                 const RunConfig& config) {
  std::vector<protocol::Client> clients;
  clients.reserve(slices.train.size());
  for (std::size_t c = 0; c < slices.train.size(); ++c) {
    clients.emplace_back(static_cast<protocol::ClientId>(c), table.data.subset(slices.train[c]));
  }
  transport::SimNetwork net(config.train.seed);
  return protocol::run_training(server_config(config, table.data.n_classes), clients, net);
}

RunOutcome run(const RunConfig& config) {
  config.validate();
  const PreparedData prepared = prepare_data(config);

  RunOutcome out;
  out.central = gbt::train_central(prepared.train.data, config.train);
  RunReport& report = out.report;
  report.config = config.echo();
  report.j_central = out.central.objective;
  report.tree_diff = "n/a";
  auto add = [&](const char* engine, const char* split, const std::string& client,
                 const gbt::Ensemble& model, const gbt::Dataset& data) {
    report.metrics.push_back(MetricsRow::make(engine, split, client, score(model, data)));
  };
  add("central", "train", "", out.central.ensemble, prepared.train.data);
  add("central", "valid", "", out.central.ensemble, prepared.valid.data);

  if (config.mode == Mode::kFed) {
    const ClientSlices slices = client_slices(prepared, config);
    protocol::FedRun fed = train_federated(prepared.table, slices, config);
    if (fed.aborted) {
      fail(fed.error_code, "federated run aborted after " + std::to_string(fed.ensemble.rounds.size()) +
                               " rounds: " + fed.error);
    }
    report.j_fed = fed.objective;
    add("fed", "train", "", fed.ensemble, prepared.train.data);
    add("fed", "valid", "", fed.ensemble, prepared.valid.data);
    for (std::size_t c = 0; c < slices.valid.size(); ++c) {
      const gbt::Dataset local = prepared.table.data.subset(slices.valid[c]);
      add("central", "valid", slices.names[c], out.central.ensemble, local);
      add("fed", "valid", slices.names[c], fed.ensemble, local);
    }
    report.eval_note = kClientNote;
    const auto diff = gbt::first_divergence(out.central.ensemble, fed.ensemble, 1e-12);
    report.tree_diff = diff ? *diff : "identical";
    out.fed = std::move(fed);
  }
  report.finalize();
  return out;
}

SweepOutcome sweep(const RunConfig& config, SweepAxis axis, const std::vector<std::string>& values) {
  if (values.size() < 2) fail(ErrorCode::kConfig, "a sweep needs at least two values");
  SweepOutcome out;
  out.axis = axis;
  out.values = values;
  for (const auto& v : values) {
    RunConfig c = config;
    c.mode = Mode::kFed;
    c.set(axis == SweepAxis::kBins ? "bins" : "rho", v);
    out.reports.push_back(run(c).report);
  }
  return out;
}

void write_sweep(const SweepOutcome& sweep, const std::string& dir) {
  const std::filesystem::path base(dir);
  const char* axis = sweep.axis == SweepAxis::kBins ? "bins" : "rho";
  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    write_report(sweep.reports[i], (base / (std::string(axis) + "-" + sweep.values[i])).string());
  }
  std::ofstream out(base / "sweep.csv");
  if (!out) fail(ErrorCode::kIo, "cannot write " + (base / "sweep.csv").string());
  out << axis << ",max_gap,central_valid_acc,fed_valid_acc,central_valid_f1,fed_valid_f1,tree_diff\n";
  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    const RunReport& r = sweep.reports[i];
    const MetricsRow* c = r.find("central", "valid");
    const MetricsRow* f = r.find("fed", "valid");
    std::string diff = r.tree_diff;
    std::replace(diff.begin(), diff.end(), ',', ';');
    out << sweep.values[i] << ',' << format_double(r.max_gap) << ','
        << format_double(c->accuracy) << ',' << format_double(f->accuracy) << ','
        << format_double(c->macro_f1) << ',' << format_double(f->macro_f1) << ',' << diff << '\n';
  }
}

std::string format_sweep(const SweepOutcome& sweep) {
  std::ostringstream os;
  const char* axis = sweep.axis == SweepAxis::kBins ? "bins" : "rho";
  os << std::setw(8) << axis << std::setw(14) << "max_gap" << std::setw(12) << "acc_cent"
     << std::setw(12) << "acc_fed" << std::setw(12) << "f1_cent" << std::setw(12) << "f1_fed"
     << '\n';
  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    const RunReport& r = sweep.reports[i];
    const MetricsRow* c = r.find("central", "valid");
    const MetricsRow* f = r.find("fed", "valid");
    os << std::setw(8) << sweep.values[i] << std::setw(14) << std::scientific
       << std::setprecision(3) << r.max_gap << std::fixed << std::setprecision(4)
       << std::setw(12) << c->accuracy << std::setw(12) << f->accuracy << std::setw(12)
       << c->macro_f1 << std::setw(12) << f->macro_f1 << '\n';
  }
  return os.str();
}

}  // namespace fedscs::eval
