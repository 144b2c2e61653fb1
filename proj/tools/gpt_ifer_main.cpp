// Copyright 2026 The gpt-ifer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpt_ifer/experiments.hpp"
#include "json.hpp"

namespace {

using gpt_ifer::ExperimentParams;
using gpt_ifer::ExperimentReport;

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GPT_IFER_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::runtime_error(std::string("GPT_IFER_SEED is not an unsigned integer: ") + env);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interferometric computation across probabilistic theories"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "Print the experiment registry");

  auto* run = app.add_subcommand("run", "Run one experiment, or 'all' for the reproduction suite");
  std::string experiment;
  std::string theory;
  std::size_t n = 0, big_n = 0, marked = 0, iterations = 0, samples = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "json";
  std::string oracle_path;
  std::string config_path;
  bool timing = false;
  run->add_option("experiment", experiment, "Experiment name (see 'list') or 'all'")->required();
  auto* o_theory = run->add_option("--theory", theory, "Theory name");
  auto* o_n = run->add_option("--n", n, "Number of input bits (branches = 2^n)");
  auto* o_big_n = run->add_option("--N", big_n, "Number of branches");
  auto* o_marked = run->add_option("--marked", marked, "Marked branch for grover");
  auto* o_iter = run->add_option("--iterations", iterations, "Grover iterations");
  auto* o_samples = run->add_option("--samples", samples, "Sample count for sampled checks");
  auto* o_seed = run->add_option("--seed", seed, "RNG seed (default 0, or $GPT_IFER_SEED)");
  run->add_option("--out", out_path, "Output file (default stdout)");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--oracle", oracle_path, "OracleSpec JSON file for dj-sweep")->check(CLI::ExistingFile);
  run->add_option("--config", config_path, "GroverConfig JSON file for grover")->check(CLI::ExistingFile);
  run->add_flag("--timing", timing, "Include runtime_ms (reports are then not reproducible)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& e : gpt_ifer::experiment_registry()) std::cout << e.name << "\t" << e.description << "\n";
      std::cout << "\ntheories:";
      for (const auto& t : gpt_ifer::theory_names()) std::cout << " " << t;
      std::cout << "\n";
      return 0;
    }

    ExperimentParams params;
    params.seed = o_seed->count() ? seed : default_seed();
    params.timing = timing;
    if (o_theory->count()) params.theory = theory;
    if (o_n->count()) params.n = n;
    if (o_big_n->count()) params.N = big_n;
    if (o_marked->count()) params.marked = marked;
    if (o_iter->count()) params.iterations = iterations;
    if (o_samples->count()) params.samples = samples;
    if (!oracle_path.empty()) params.oracle = read_json_file(oracle_path).get<gpt_ifer::OracleSpec>();
    if (!config_path.empty()) {
      const auto cfg = read_json_file(config_path).get<gpt_ifer::GroverConfig>();
      if (!params.N) params.N = cfg.N;
      if (!params.marked) params.marked = cfg.marked;
      if (!params.iterations) params.iterations = cfg.iterations;
    }

    if (experiment == "all") {
      auto suite = gpt_ifer::full_suite(params.seed);
      for (auto& entry : suite) entry.second.timing = timing;
      const auto reports = gpt_ifer::run_suite(suite);
      write_output(format == "csv" ? gpt_ifer::suite_csv(reports) : gpt_ifer::canonical_json(gpt_ifer::suite_json(reports)),
                   out_path);
      for (const auto& r : reports)
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.experiment << " [" << r.theory << "]\n";
      bool pass = true;
      for (const auto& r : reports) pass = pass && r.pass;
      return pass ? 0 : 1;
    }

    const ExperimentReport report = gpt_ifer::run_experiment(experiment, params);
    write_output(format == "csv" ? gpt_ifer::report_csv(report) : gpt_ifer::canonical_json(report), out_path);
    return report.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (run->parsed()) std::cerr << run->help();
    return 2;
  }
}
