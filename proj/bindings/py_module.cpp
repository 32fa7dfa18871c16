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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tracemark/detector.hpp"
#include "tracemark/marker.hpp"
#include "tracemark/metrics.hpp"
#include "tracemark/provider_config.hpp"
#include "tracemark/ranksum.hpp"
#include "tracemark/sim.hpp"

namespace pyb = pybind11;
using namespace tracemark;

namespace {

pyb::int_ big(const mpz_class& z) {
  return pyb::reinterpret_steal<pyb::int_>(
      PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

std::unique_ptr<model::LogitsProvider> provider_from(const std::string& spec) {
  return provider::make_provider(provider::parse_provider_spec(spec));
}

sim::MemorizationModel memo_from(std::optional<double> theta,
                                 std::optional<double> boost, double hit) {
  if (theta) return sim::MemorizationModel::rank_geometric(*theta);
  if (boost) return sim::MemorizationModel::additive(*boost, hit);
  return sim::MemorizationModel::none();
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() =
      "data-marking and training-usage auditing for code repositories";

  mod.def("tokenizer_id",
          [] { return tok::Vocabulary::instance().tokenizer_id(); });

  mod.def(
      "rank_sum_counts",
      [](int64_t n, int64_t m) {
        auto dist = nulldist::rank_sum_pdf(n, m);
        pyb::list out;
        for (const auto& c : dist.counts) out.append(big(c));
        return out;
      },
      pyb::arg("n"), pyb::arg("m"),
      "exact tuple counts for sums n..n*m (denominator m**n)");

  mod.def(
      "threshold",
      [](int64_t n, int64_t m, const std::string& p) {
        auto th = nulldist::threshold(n, m, parse_decimal_probability(p));
        pyb::dict out;
        out["value"] = th.undetectable() ? pyb::object(pyb::none())
                                         : pyb::object(pyb::int_(*th.value));
        out["cdf_num"] = big(th.cdf_at_value.num);
        out["cdf_den"] = big(th.cdf_at_value.den);
        return out;
      },
      pyb::arg("n"), pyb::arg("m"), pyb::arg("p"),
      "largest T with Pr(S <= T) <= p, or None when undetectable");

  mod.def(
      "pvalue",
      [](int64_t n, int64_t m, int64_t s) {
        auto pv = detector::pvalue(n, m, s);
        return pyb::make_tuple(big(pv.num), big(pv.den));
      },
      pyb::arg("n"), pyb::arg("m"), pyb::arg("s"));

  mod.def(
      "token_edit_distance",
      [](const std::string& a, const std::string& b) {
        return metrics::token_edit_distance(a, b);
      },
      pyb::arg("original"), pyb::arg("marked"));

  mod.def(
      "mark_repository",
      [](const std::string& src, const std::string& out,
         const std::string& manifest_path, const std::string& oracle,
         int m, int64_t k, int64_t r, uint64_t seed,
         const std::vector<std::string>& include) {
        auto oracle_p = provider_from(oracle);
        marker::MarkParams params{m, k, r};
        auto repo =
            marker::mark_repository(src, out, *oracle_p, params, seed,
                                    include);
        manifest::save_private(repo.repo_manifest, manifest_path);
        pyb::dict res;
        res["files"] = repo.repo_manifest.file_count();
        res["marks"] = repo.repo_manifest.total_marks();
        res["diagnostics"] = repo.diagnostics;
        return res;
      },
      pyb::arg("src"), pyb::arg("out"), pyb::arg("manifest"), pyb::arg("oracle"),
      pyb::arg("m") = 100, pyb::arg("K") = 100, pyb::arg("R") = 500,
      pyb::arg("seed") = 0,
      pyb::arg("include") = std::vector<std::string>{"*.py"});

  mod.def(
      "detect",
      [](const std::string& repo, const std::string& manifest_path,
         const std::string& target, const std::string& oracle,
         const std::string& p, std::optional<std::string> mode) {
        auto mf = manifest::load(manifest_path);
        auto target_cfg = provider::parse_provider_spec(target);
        if (mode) provider::set_access_mode(target_cfg, *mode);
        auto target_p = provider::make_provider(target_cfg);
        auto oracle_p = provider_from(oracle);
        auto report = detector::detect(std::filesystem::path(repo), mf,
                                       *target_p, *oracle_p, p);
        return report.to_json();
      },
      pyb::arg("repo"), pyb::arg("manifest"), pyb::arg("target"),
      pyb::arg("oracle"), pyb::arg("p") = "0.05",
      pyb::arg("mode") = std::nullopt,
      "runs detection and returns the JSON report as a string");

  mod.def(
      "simulate",
      [](int64_t n, int m, const std::string& p, int64_t trials,
         uint64_t seed, std::optional<double> theta,
         std::optional<double> boost, double hit) {
        auto stats = sim::simulate_dsr(n, m, p, memo_from(theta, boost, hit),
                                       trials, seed);
        pyb::dict out;
        out["trials"] = stats.trials;
        out["successes"] = stats.successes;
        out["rate"] = stats.rate();
        out["se"] = stats.se();
        return out;
      },
      pyb::arg("n"), pyb::arg("m"), pyb::arg("p") = "0.05",
      pyb::arg("trials") = 1000, pyb::arg("seed") = 0,
      pyb::arg("theta") = std::nullopt, pyb::arg("boost") = std::nullopt,
      pyb::arg("hit") = 1.0,
      "rank-level Monte Carlo; without theta/boost it draws the exact null");

  pyb::register_exception<ArgumentError>(mod, "ArgumentError",
                                        PyExc_ValueError);
  pyb::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
  pyb::register_exception<TransportError>(mod, "TransportError",
                                         PyExc_ConnectionError);
}
