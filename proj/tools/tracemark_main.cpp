// Copyright 2026 The Tracemark Authors.
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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tracemark/detector.hpp"
#include "tracemark/marker.hpp"
#include "tracemark/metrics.hpp"
#include "tracemark/provider_config.hpp"
#include "tracemark/ranksum.hpp"
#include "tracemark/sim.hpp"

namespace {

using namespace tracemark;

// Option precedence: command-line flag > --config file entry > environment
// variable TRACEMARK_<NAME> > built-in default.
class Options {
 public:
  void load_config(const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path);
    try {
      config_ = nlohmann::json::parse(std::string(
          (std::istreambuf_iterator<char>(in)),
          std::istreambuf_iterator<char>()));
    } catch (const std::exception& e) {
      throw ConfigError("config file " + path + ": " + e.what());
    }
  }

  std::string resolve(const std::string& name, bool flag_given,
                      const std::string& flag_value,
                      const std::string& fallback) const {
    if (flag_given) return flag_value;
    if (config_.contains(name)) {
      const auto& v = config_.at(name);
      if (v.is_string()) return v.get<std::string>();
      return v.dump();
    }
    std::string env = "TRACEMARK_";
    for (char c : name) env += static_cast<char>(std::toupper(c));
    if (const char* v = std::getenv(env.c_str())) return v;
    return fallback;
  }

 private:
  nlohmann::json config_ = nlohmann::json::object();
};

std::string format_rank_threshold(const nulldist::Threshold& th) {
  std::string t = th.undetectable() ? std::string("undetectable")
                                    : std::to_string(*th.value);
  return "T=" + t + " cdf=" + th.cdf_at_value.to_string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

int run(int argc, char** argv) {
  CLI::App app{
      "tracemark: plant deniable variable-renaming marks in a source "
      "repository and audit whether a code model was trained on it"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON file with default option values");
  Options opts;

  // ---- nulldist ----
  auto* cmd_null = app.add_subcommand(
      "nulldist", "threshold and exact null distribution of the rank sum");
  int64_t nd_n = 0;
  int64_t nd_m = 0;
  std::string nd_p, nd_csv;
  auto* nd_n_opt = cmd_null->add_option("--n", nd_n, "number of marks");
  auto* nd_m_opt = cmd_null->add_option("--m", nd_m, "versions per mark");
  auto* nd_p_opt =
      cmd_null->add_option("--p", nd_p, "false-detection bound (decimal)");
  cmd_null->add_option("--csv", nd_csv,
                       "also write the full pdf as sum,count,probability");

  // ---- mark ----
  auto* cmd_mark = app.add_subcommand("mark", "inject marks into a repo");
  std::string mk_src, mk_out, mk_manifest, mk_oracle, mk_m, mk_k, mk_r,
      mk_seed;
  std::vector<std::string> mk_globs;
  cmd_mark->add_option("src", mk_src, "source directory")->required();
  auto* mk_out_opt = cmd_mark->add_option("--out", mk_out,
                                          "output directory (marked tree)");
  auto* mk_mani_opt =
      cmd_mark->add_option("--manifest", mk_manifest,
                           "where to write the private manifest");
  auto* mk_m_opt = cmd_mark->add_option("--m", mk_m, "versions per mark");
  auto* mk_k_opt =
      cmd_mark->add_option("--K", mk_k, "mark sparsity (lines per mark)");
  auto* mk_r_opt =
      cmd_mark->add_option("--R", mk_r, "minimum oracle rank for a site");
  auto* mk_seed_opt = cmd_mark->add_option("--seed", mk_seed, "rng seed");
  auto* mk_oracle_opt = cmd_mark->add_option(
      "--oracle", mk_oracle, "oracle provider (mock:<seed> or config path)");
  cmd_mark->add_option("--include", mk_globs,
                       "glob(s) of files to mark (default *.py)");

  // ---- detect ----
  auto* cmd_detect =
      app.add_subcommand("detect", "audit a target model against a manifest");
  std::string dt_repo, dt_manifest, dt_target, dt_oracle, dt_p, dt_mode,
      dt_report;
  auto* dt_repo_opt =
      cmd_detect->add_option("--repo", dt_repo, "published directory");
  auto* dt_mani_opt =
      cmd_detect->add_option("--manifest", dt_manifest, "private manifest");
  auto* dt_target_opt = cmd_detect->add_option(
      "--target", dt_target, "target provider (mock:<seed> or config path)");
  auto* dt_oracle_opt = cmd_detect->add_option(
      "--oracle", dt_oracle, "oracle provider (must match the manifest)");
  auto* dt_p_opt =
      cmd_detect->add_option("--p", dt_p, "false-detection bound (decimal)");
  cmd_detect->add_option("--mode", dt_mode,
                         "target access mode: full or restricted");
  cmd_detect->add_option("--report", dt_report, "write the JSON report here");

  // ---- simulate ----
  auto* cmd_sim = app.add_subcommand(
      "simulate", "Monte Carlo validation without a real model");
  std::string sm_mode = "fdr", sm_p, sm_theta, sm_csv, sm_sweep, sm_grid,
      sm_repo;
  int64_t sm_n = 20, sm_trials = 1000;
  int sm_m = 100;
  double sm_boost = 1e9, sm_hit = 1.0;
  uint64_t sm_seed = 0;
  int64_t sm_k = 100, sm_r = 500;
  cmd_sim->add_option("--mode", sm_mode, "fdr | dsr | e2e")->required();
  cmd_sim->add_option("--n", sm_n, "marks per trial");
  cmd_sim->add_option("--m", sm_m, "versions per mark");
  auto* sm_p_opt = cmd_sim->add_option("--p", sm_p, "bound (decimal)");
  cmd_sim->add_option("--theta", sm_theta,
                      "geometric memorization parameter (dsr mode)");
  cmd_sim->add_option("--boost", sm_boost, "logit boost (dsr/e2e)");
  cmd_sim->add_option("--hit", sm_hit, "memorized fraction (dsr/e2e)");
  cmd_sim->add_option("--trials", sm_trials, "trials per point");
  cmd_sim->add_option("--seed", sm_seed, "rng seed");
  cmd_sim->add_option("--csv", sm_csv, "write results as CSV");
  cmd_sim->add_option("--sweep", sm_sweep, "sweep axis: n, m, p, theta");
  cmd_sim->add_option("--grid", sm_grid, "comma-separated sweep grid");
  cmd_sim->add_option("--repo", sm_repo, "fixture directory (e2e mode)");
  cmd_sim->add_option("--K", sm_k, "sparsity for e2e marking");
  cmd_sim->add_option("--R", sm_r, "rank threshold for e2e marking");

  // ---- metrics ----
  auto* cmd_metrics =
      app.add_subcommand("metrics", "imperceptibility accounting");
  std::string mt_manifest, mt_original, mt_marked, mt_csv;
  cmd_metrics->add_option("--manifest", mt_manifest, "private manifest")
      ->required();
  cmd_metrics->add_option("--original", mt_original, "pre-mark tree")
      ->required();
  cmd_metrics->add_option("--marked", mt_marked, "published tree")
      ->required();
  cmd_metrics->add_option("--csv", mt_csv, "write the per-file CSV here");

  CLI11_PARSE(app, argc, argv);
  opts.load_config(config_path);

  auto resolve = [&](const char* name, CLI::Option* opt,
                     const std::string& flag_value,
                     const std::string& fallback) {
    return opts.resolve(name, opt->count() > 0, flag_value, fallback);
  };

  if (*cmd_null) {
    std::string n_s = resolve("n", nd_n_opt, std::to_string(nd_n), "");
    std::string m_s = resolve("m", nd_m_opt, std::to_string(nd_m), "");
    std::string p_s = resolve("p", nd_p_opt, nd_p, "");
    if (n_s.empty() || m_s.empty() || p_s.empty()) {
      throw ArgumentError("nulldist requires --n, --m and --p");
    }
    auto dist = nulldist::rank_sum_pdf(std::stoll(n_s), std::stoll(m_s));
    auto th = nulldist::threshold(dist, parse_decimal_probability(p_s));
    std::cout << format_rank_threshold(th) << "\n";
    if (!nd_csv.empty()) {
      std::string csv = "sum,count,probability\n";
      mpq_class total(dist.total());
      for (int64_t s = dist.min_sum(); s <= dist.max_sum(); ++s) {
        mpq_class prob(dist.count_at(s));
        prob /= total;
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.12g", prob.get_d());
        csv += std::to_string(s) + "," + dist.count_at(s).get_str() + "," +
               buf + "\n";
      }
      write_text(nd_csv, csv);
    }
    return 0;
  }

  if (*cmd_mark) {
    std::string out = resolve("out", mk_out_opt, mk_out, "");
    std::string manifest_path =
        resolve("manifest", mk_mani_opt, mk_manifest, "");
    std::string oracle_spec = resolve("oracle", mk_oracle_opt, mk_oracle, "");
    if (out.empty() || manifest_path.empty() || oracle_spec.empty()) {
      throw ArgumentError("mark requires --out, --manifest and --oracle");
    }
    marker::MarkParams params;
    params.m = std::stoi(resolve("m", mk_m_opt, mk_m, "100"));
    params.sparsity_k = std::stoll(resolve("k", mk_k_opt, mk_k, "100"));
    params.rank_threshold = std::stoll(resolve("r", mk_r_opt, mk_r, "500"));
    uint64_t seed = std::stoull(resolve("seed", mk_seed_opt, mk_seed, "0"));

    auto oracle = provider::make_provider(
        provider::parse_provider_spec(oracle_spec));
    std::vector<std::string> globs =
        mk_globs.empty() ? std::vector<std::string>{"*.py"} : mk_globs;
    auto repo = marker::mark_repository(mk_src, out, *oracle, params, seed,
                                        globs);
    for (const auto& d : repo.diagnostics) std::cerr << d << "\n";
    manifest::save_private(repo.repo_manifest, manifest_path);
    std::cout << "marked files=" << repo.repo_manifest.file_count()
              << " marks=" << repo.repo_manifest.total_marks()
              << " manifest=" << manifest_path << "\n";
    return 0;
  }

  if (*cmd_detect) {
    std::string repo = resolve("repo", dt_repo_opt, dt_repo, "");
    std::string manifest_path =
        resolve("manifest", dt_mani_opt, dt_manifest, "");
    std::string target_spec =
        resolve("target", dt_target_opt, dt_target, "");
    std::string oracle_spec =
        resolve("oracle", dt_oracle_opt, dt_oracle, "");
    std::string p_s = resolve("p", dt_p_opt, dt_p, "0.05");
    if (repo.empty() || manifest_path.empty() || target_spec.empty() ||
        oracle_spec.empty()) {
      throw ArgumentError(
          "detect requires --repo, --manifest, --target and --oracle");
    }
    auto mf = manifest::load(manifest_path);
    auto target_cfg = provider::parse_provider_spec(target_spec);
    if (!dt_mode.empty()) provider::set_access_mode(target_cfg, dt_mode);
    auto target = provider::make_provider(target_cfg);
    auto oracle = provider::make_provider(
        provider::parse_provider_spec(oracle_spec));

    auto report = detector::detect(std::filesystem::path(repo), mf, *target,
                                   *oracle, p_s);
    for (const auto& d : report.dropped) {
      std::cerr << "dropped " << d.file
                << (d.token_index >= 0
                        ? " @" + std::to_string(d.token_index)
                        : std::string())
                << ": " << d.reason << "\n";
    }
    std::string t = report.threshold
                        ? std::to_string(*report.threshold)
                        : std::string("undetectable");
    std::cout << "decision=" << report.decision_text() << " n=" << report.n
              << " m=" << report.m << " S=" << report.rank_sum << " T=" << t
              << " p=" << report.p_text << " p_value=" << report.p_value_num
              << "/" << report.p_value_den << "\n";
    if (!dt_report.empty()) write_text(dt_report, report.to_json());
    return 0;
  }

  if (*cmd_sim) {
    std::string p_s = resolve("p", sm_p_opt, sm_p, "0.05");
    sim::MemorizationModel memo = sim::MemorizationModel::none();
    if (sm_mode == "dsr" || sm_mode == "e2e") {
      if (!sm_theta.empty()) {
        memo = sim::MemorizationModel::rank_geometric(std::stod(sm_theta));
      } else {
        memo = sim::MemorizationModel::additive(sm_boost, sm_hit);
      }
    }

    std::string csv;
    if (sm_mode == "fdr" || sm_mode == "dsr") {
      if (sm_mode == "fdr") memo = sim::MemorizationModel::none();
      if (!sm_sweep.empty()) {
        std::vector<double> grid;
        std::string item;
        std::istringstream stream(sm_grid);
        while (std::getline(stream, item, ',')) {
          if (!item.empty()) grid.push_back(std::stod(item));
        }
        if (grid.empty()) {
          throw ArgumentError("--sweep needs a non-empty --grid");
        }
        csv = sim::sweep_dsr(sm_sweep, grid, sm_n, sm_m, p_s, memo,
                             sm_trials, sm_seed)
                  .to_csv();
      } else {
        auto st = sim::simulate_dsr(sm_n, sm_m, p_s, memo, sm_trials,
                                    sm_seed);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%lld,%lld,%lld,%.6f,%.6f\n",
                      static_cast<long long>(sm_n),
                      static_cast<long long>(st.trials),
                      static_cast<long long>(st.successes), st.rate(),
                      st.se());
        csv = std::string("point,trials,successes,rate,se\n") + buf;
      }
    } else if (sm_mode == "e2e") {
      if (sm_repo.empty()) {
        throw ArgumentError("simulate --mode e2e requires --repo <fixture>");
      }
      sim::RepoFixture fixture;
      namespace fs = std::filesystem;
      std::vector<std::string> rels;
      for (auto it = fs::recursive_directory_iterator(sm_repo);
           it != fs::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        auto rel = fs::relative(it->path(), sm_repo).generic_string();
        if (rel.size() > 3 && rel.substr(rel.size() - 3) == ".py") {
          rels.push_back(rel);
        }
      }
      std::sort(rels.begin(), rels.end());
      for (const auto& rel : rels) {
        std::ifstream in(fs::path(sm_repo) / rel, std::ios::binary);
        fixture.emplace_back(rel,
                             std::string((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>()));
      }
      marker::MarkParams params{sm_m, sm_k, sm_r};
      auto res = sim::end_to_end_sim(fixture, memo, p_s, sm_seed, params);
      std::cout << res.report.to_json();
      if (!sm_csv.empty()) write_text(sm_csv, res.report.to_json());
      return 0;
    } else {
      throw ArgumentError("simulate --mode must be fdr, dsr or e2e");
    }

    if (sm_csv.empty()) {
      std::cout << csv;
    } else {
      write_text(sm_csv, csv);
    }
    return 0;
  }

  if (*cmd_metrics) {
    auto mf = manifest::load(mt_manifest);
    auto summary = metrics::impact_summary(mf, mt_original, mt_marked);
    for (const auto& f : summary.files) {
      if (!f.note.empty()) std::cerr << f.path << ": " << f.note << "\n";
    }
    if (mt_csv.empty()) {
      std::cout << summary.to_csv();
    } else {
      write_text(mt_csv, summary.to_csv());
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f",
                    summary.edit_distance_per_100_loc);
      std::cout << "files=" << summary.files.size()
                << " tokens_modified=" << summary.total_tokens_modified
                << " per_100_loc=" << buf << "\n";
    }
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const tracemark::TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return 3;
  } catch (const tracemark::ProviderContractError& e) {
    std::cerr << "provider error: " << e.what() << "\n";
    return 3;
  } catch (const tracemark::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tracemark::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
