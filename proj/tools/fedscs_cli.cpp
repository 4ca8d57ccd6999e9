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

// fedscs: train, sweep and verify from the command line. Talks to the library
// through the C API only.
//
// Exit codes: 0 success, 1 verification or run failure, 2 usage/config/data
// error.

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "fedscs/fedscs.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct ConfigDeleter {
  void operator()(fedscs_config* c) const { fedscs_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<fedscs_config, ConfigDeleter>;

// Thrown to unwind with a given exit code after printing a message.
struct Exit {
  int code;
};

int exit_code_for(fedscs_status s) {
  switch (s) {
    case FEDSCS_ERR_CONFIG:
    case FEDSCS_ERR_IO:
    case FEDSCS_ERR_INGEST:
    case FEDSCS_ERR_PARTITION:
    case FEDSCS_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

void check(fedscs_status s) {
  if (s == FEDSCS_OK) return;
  std::cerr << "error: " << fedscs_status_name(s) << ": " << fedscs_last_error_message() << '\n';
  throw Exit{exit_code_for(s)};
}

template <typename Handle, typename Fn>
std::string fetch(const Handle* h, Fn fn) {
  std::size_t len = 0;
  fn(h, nullptr, 0, &len);
  std::string out(len + 1, '\0');
  check(fn(h, out.data(), out.size(), &len));
  out.resize(len);
  return out;
}

// Options shared by the training subcommands. Unset options leave the
// library defaults untouched.
struct Common {
  std::string config;
  std::optional<std::string> data, mode, clients, bins, rho, rounds, depth, seed, out, fault;
  bool exact_sketch = false;
  std::vector<std::string> settings;

  void add_to(CLI::App* app, bool with_mode) {
    app->add_option("--config", config, "key = value config file; its values override flags");
    app->add_option("--data", data, "CSV file (header row, label column)");
    if (with_mode) app->add_option("--mode", mode, "central or fed")->check(CLI::IsMember({"central", "fed"}));
    app->add_option("--clients", clients, "partition: id, iid:K or skew:K[:ALPHA]");
    app->add_option("--bins", bins, "histogram bins per feature");
    app->add_option("--rho", rho, "sketch relative accuracy");
    app->add_flag("--exact-sketch", exact_sketch, "send exact weighted quantile summaries");
    app->add_option("--rounds", rounds, "boosting rounds");
    app->add_option("--depth", depth, "maximum tree depth");
    app->add_option("--seed", seed, "seed for data, split, partition and sampling");
    app->add_option("--out", out, "output directory");
    app->add_option("--inject-fault", fault, "server defect: none, tie-break, double-eta");
    app->add_option("--set", settings, "extra KEY=VALUE setting (repeatable)");
  }

  ConfigPtr build() const {
    fedscs_config* raw = nullptr;
    check(fedscs_config_create(&raw));
    ConfigPtr cfg(raw);
    auto set = [&](const char* key, const std::optional<std::string>& v) {
      if (v) check(fedscs_config_set(cfg.get(), key, v->c_str()));
    };
    set("data", data);
    set("mode", mode);
    set("clients", clients);
    set("bins", bins);
    set("rho", rho);
    set("rounds", rounds);
    set("depth", depth);
    set("seed", seed);
    set("out", out);
    set("fault", fault);
    if (exact_sketch) check(fedscs_config_set(cfg.get(), "exact_sketch", "true"));
    for (const auto& kv : settings) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects KEY=VALUE, got '" << kv << "'\n";
        throw Exit{kExitUsage};
      }
      check(fedscs_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (!config.empty()) check(fedscs_config_load(cfg.get(), config.c_str()));
    return cfg;
  }
};

std::string config_value(const fedscs_config* cfg, const char* key) {
  std::size_t len = 0;
  fedscs_config_get(cfg, key, nullptr, 0, &len);
  std::string out(len + 1, '\0');
  check(fedscs_config_get(cfg, key, out.data(), out.size(), &len));
  out.resize(len);
  return out;
}

int cmd_train(const Common& common) {
  ConfigPtr cfg = common.build();
  fedscs_report* report = nullptr;
  check(fedscs_run(cfg.get(), &report));
  std::unique_ptr<fedscs_report, void (*)(fedscs_report*)> guard(report, fedscs_report_destroy);
  std::cout << fetch(report, fedscs_report_format);
  const std::string out = config_value(cfg.get(), "out");
  if (!out.empty()) {
    check(fedscs_report_write(report, out.c_str()));
    std::cout << "report written to " << out << '\n';
  }
  return 0;
}

int cmd_sweep(const Common& common, const std::string& axis, const std::vector<std::string>& values) {
  if (values.size() < 2) {
    std::cerr << "error: sweep needs at least two values\n";
    return kExitUsage;
  }
  ConfigPtr cfg = common.build();
  std::vector<const char*> raw;
  for (const auto& v : values) raw.push_back(v.c_str());
  fedscs_sweep* sweep = nullptr;
  check(fedscs_sweep_run(cfg.get(), axis.c_str(), raw.data(), raw.size(), &sweep));
  std::unique_ptr<fedscs_sweep, void (*)(fedscs_sweep*)> guard(sweep, fedscs_sweep_destroy);
  std::cout << fetch(sweep, fedscs_sweep_format);
  const std::string out = config_value(cfg.get(), "out");
  if (!out.empty()) {
    check(fedscs_sweep_write(sweep, out.c_str()));
    std::cout << "sweep written to " << out << '\n';
  }
  return 0;
}

int cmd_verify(const Common& common) {
  ConfigPtr cfg = common.build();
  fedscs_verify_result* result = nullptr;
  check(fedscs_verify(cfg.get(), &result));
  std::unique_ptr<fedscs_verify_result, void (*)(fedscs_verify_result*)> guard(
      result, fedscs_verify_destroy);
  std::cout << fetch(result, fedscs_verify_format);
  return fedscs_verify_passed(result) ? 0 : kExitFailure;
}

struct GenerateOptions {
  std::string out;
  std::string rows = "4000", features = "8", classes = "16", ids = "8", discrete = "0", seed = "0";
  std::string spread = "1";
};

int cmd_generate(const GenerateOptions& g) {
  fedscs_config* raw = nullptr;
  check(fedscs_config_create(&raw));
  ConfigPtr cfg(raw);
  const std::pair<const char*, const std::string*> settings[] = {
      {"synth_rows", &g.rows},         {"synth_features", &g.features},
      {"synth_classes", &g.classes},   {"synth_ids", &g.ids},
      {"synth_discrete", &g.discrete}, {"synth_spread", &g.spread},
      {"seed", &g.seed},
  };
  for (const auto& [k, v] : settings) check(fedscs_config_set(cfg.get(), k, v->c_str()));
  fedscs_dataset* data = nullptr;
  check(fedscs_dataset_generate_blobs(cfg.get(), &data));
  std::unique_ptr<fedscs_dataset, void (*)(fedscs_dataset*)> guard(data, fedscs_dataset_destroy);
  check(fedscs_dataset_write_csv(data, g.out.c_str()));
  std::cout << "wrote " << fedscs_dataset_rows(data) << " rows, " << fedscs_dataset_features(data)
            << " features, " << fedscs_dataset_classes(data) << " classes to " << g.out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated histogram gradient boosting with sketch-based binning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fedscs_version()));

  Common train_opts;
  auto* train = app.add_subcommand("train", "train centrally or federated and report metrics");
  train_opts.add_to(train, true);

  Common sweep_opts;
  std::string axis;
  std::vector<std::string> values;
  auto* sweep = app.add_subcommand("sweep", "federated runs over several bins or rho values");
  sweep_opts.add_to(sweep, false);
  sweep->add_option("--axis", axis, "bins or rho")->required()->check(CLI::IsMember({"bins", "rho"}));
  sweep->add_option("--values", values, "values to sweep (at least two)")->required();

  Common verify_opts;
  auto* verify = app.add_subcommand("verify", "run the property suite on built-in data");
  verify_opts.add_to(verify, false);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "write a synthetic Gaussian-blob CSV");
  generate->add_option("--out", gen.out, "output CSV path")->required();
  generate->add_option("--rows", gen.rows);
  generate->add_option("--features", gen.features);
  generate->add_option("--classes", gen.classes);
  generate->add_option("--ids", gen.ids, "distinct values of the id column");
  generate->add_option("--discrete", gen.discrete, "leading features rounded to integers");
  generate->add_option("--spread", gen.spread, "blob standard deviation");
  generate->add_option("--seed", gen.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) return cmd_train(train_opts);
    if (*sweep) return cmd_sweep(sweep_opts, axis, values);
    if (*verify) return cmd_verify(verify_opts);
    if (*generate) return cmd_generate(gen);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}
