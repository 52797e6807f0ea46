// Copyright 2026 The teleportsim Authors
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

#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid input,
// 2 infeasible scheme or incapable channel, 64 usage error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "teleportsim/channel.hpp"
#include "teleportsim/errors.hpp"
#include "teleportsim/explorer.hpp"
#include "teleportsim/resources.hpp"
#include "teleportsim/scheme.hpp"
#include "teleportsim/serialization.hpp"
#include "teleportsim/teleport.hpp"

namespace teleportsim {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitInfeasible = 2, kExitUsage = 64 };

// Truncated decimals such as 0.577 are accepted and renormalized.
inline constexpr double kCliChannelSlack = 1e-2;

namespace detail {

inline std::uint64_t default_seed() {
  const char* env = std::getenv("TELEPORTSIM_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') throw ValidationError(std::string("TELEPORTSIM_SEED is not an integer: ") + env);
  return v;
}

inline SchmidtChannel parse_channel(const std::vector<double>& a) {
  if (a.size() != 3) throw ValidationError("--channel needs three comma-separated coefficients");
  return SchmidtChannel::normalized(a[0], a[1], a[2], kCliChannelSlack);
}

/// Midpoint of the widest admissible interval.
inline double pick_theta3(const SchmidtChannel& ch) {
  const auto intervals = admissible_theta3(ch);
  if (intervals.empty()) throw InfeasibleError("no admissible theta3 for this channel", intervals);
  const Interval* best = &intervals.front();
  for (const auto& iv : intervals) {
    if (iv.width() > best->width()) best = &iv;
  }
  return 0.5 * (best->lo + best->hi);
}

struct Solved {
  SchmidtChannel original;
  SchmidtChannel canonical;
  ChannelPermutation perm;
  SchemeParams params;
};

inline Solved solve_for(const std::vector<double>& coeffs, std::optional<double> theta3,
                        std::optional<double> theta2) {
  const SchmidtChannel ch = parse_channel(coeffs);
  if (!is_teleport_capable(ch)) {
    const auto sq = ch.squared();
    throw CapabilityError("channel cannot teleport a qubit perfectly: max a_j^2 = " +
                          format_double(std::max({sq[0], sq[1], sq[2]})) + " exceeds 1/2");
  }
  auto [canon, perm] = canonicalize(ch);
  const double t3 = theta3 ? *theta3 : pick_theta3(canon);
  SolveHints hints;
  hints.theta2 = theta2;
  return {ch, canon, perm, solve_constraints(canon, t3, hints)};
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file " + path);
  f << text;
}

inline std::string render(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline std::string render_sweep(const SweepResult& r, const std::string& format) {
  if (format == "json") return render(to_json(r));
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Perfect qubit teleportation through two-qutrit channels"};
  app.name("teleportsim");
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int density = kDefaultDensity;
  std::vector<double> channel;
  std::optional<double> theta3;
  std::optional<double> theta2;
  int inputs = 20;

  auto add_common = [&](CLI::App* sub, bool with_density) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out_path, "Write output to this file instead of stdout");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { seed = s, seed_given = true; },
        "RNG seed (default: $TELEPORTSIM_SEED or 0)");
    if (with_density) sub->add_option("--density", density, "Grid points per axis")->check(CLI::Range(2, 100000));
  };
  auto add_channel = [&](CLI::App* sub) {
    sub->add_option("--channel", channel, "Schmidt coefficients a0,a1,a2")->required()->delimiter(',')->expected(3);
    sub->add_option("--theta3", theta3, "Free rotation angle (default: inside the admissible set)");
    sub->add_option("--theta2", theta2, "theta2 when the channel leaves it free");
  };

  CLI::App* verify = app.add_subcommand("verify", "Solve a scheme and run the protocol on random inputs");
  add_common(verify, false);
  add_channel(verify);
  verify->add_option("--inputs", inputs, "Haar-random input qubits")->check(CLI::Range(1, 1000000));
  CLI::App* report = app.add_subcommand("report", "Resource quantifiers of a solved scheme");
  add_common(report, false);
  add_channel(report);
  CLI::App* case1 = app.add_subcommand("sweep-case1", "Channels with a1 = a2");
  add_common(case1, true);
  CLI::App* case2 = app.add_subcommand("sweep-case2", "Channels with a1 = 1/sqrt2");
  add_common(case2, true);
  CLI::App* degenerate = app.add_subcommand("sweep-degenerate", "Channel (0, 1/sqrt2, 1/sqrt2) over theta1");
  add_common(degenerate, true);
  CLI::App* bounds = app.add_subcommand("bounds", "Trade-off bounds on a grid of channel entanglement");
  add_common(bounds, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (!seed_given) seed = detail::default_seed();
    if (verify->parsed() || report->parsed()) {
      // verify and report are JSON unless asked otherwise
      if (verify->count("--format") == 0 && report->count("--format") == 0) format = "json";
    }

    if (verify->parsed()) {
      const auto s = detail::solve_for(channel, theta3, theta2);
      std::mt19937_64 rng(mix_seed(seed, 0));
      std::vector<double> worst(6, 1.0);
      double mean = 0.0;
      double min_fid = 1.0;
      TeleportReport last;
      for (int k = 0; k < inputs; ++k) {
        last = run_teleport(haar_random_qubit(rng), s.canonical, s.params);
        for (std::size_t b = 0; b < worst.size(); ++b) worst[b] = std::min(worst[b], last.fidelities[b]);
        mean += last.mean_fidelity / inputs;
        min_fid = std::min(min_fid, last.min_fidelity);
      }
      const ResourceReport res = resource_report(s.canonical, s.params);
      nlohmann::json branches = nlohmann::json::array();
      for (std::size_t b = 0; b < last.branches.size(); ++b) {
        branches.push_back({{"label", last.branches[b].label},
                            {"probability", last.branches[b].probability},
                            {"fidelity", worst[b]}});
      }
      const bool pass = min_fid >= 1.0 - kGateFidelity;
      if (format == "json") {
        nlohmann::json j{{"channel", to_json(s.original)},
                         {"canonical_channel", to_json(s.canonical)},
                         {"permutation", s.perm.perm},
                         {"scheme", to_json(s.params)},
                         {"seed", seed},
                         {"inputs", inputs},
                         {"branches", std::move(branches)},
                         {"mean_fidelity", mean},
                         {"min_fidelity", min_fid},
                         {"perfect", pass}};
        detail::emit(detail::render(j), out_path, out);
      } else {
        std::ostringstream os;
        os << "label,probability,fidelity\n";
        for (const auto& b : branches) {
          os << b["label"].get<std::string>() << ',' << format_double(b["probability"].get<double>()) << ','
             << format_double(b["fidelity"].get<double>()) << '\n';
        }
        detail::emit(os.str(), out_path, out);
      }
      return pass ? kExitOk : kExitInfeasible;
    }

    if (report->parsed()) {
      const auto s = detail::solve_for(channel, theta3, theta2);
      const ResourceReport r = resource_report(s.canonical, s.params);
      const double lower = lower_bound_sum(r.e_channel);
      if (format == "json") {
        nlohmann::json j = to_json(r);
        j["channel"] = to_json(s.canonical);
        j["scheme"] = to_json(s.params);
        j["bound_lower"] = lower;
        detail::emit(detail::render(j), out_path, out);
      } else {
        std::ostringstream os;
        os << "e_channel,e12,h12,sum,bound_lower\n"
           << format_double(r.e_channel) << ',' << format_double(r.e12) << ',' << format_double(r.h12) << ','
           << format_double(r.sum) << ',' << format_double(lower) << '\n';
        detail::emit(os.str(), out_path, out);
      }
      return kExitOk;
    }

    if (case1->parsed()) {
      detail::emit(detail::render_sweep(sweep_case1(density, seed), format), out_path, out);
    } else if (case2->parsed()) {
      detail::emit(detail::render_sweep(sweep_case2(density, seed), format), out_path, out);
    } else if (degenerate->parsed()) {
      detail::emit(detail::render_sweep(sweep_degenerate(density, seed), format), out_path, out);
    } else if (bounds->parsed()) {
      const auto rows = bounds_table(default_entropy_grid(density));
      if (format == "json") {
        detail::emit(detail::render(to_json(rows)), out_path, out);
      } else {
        std::ostringstream os;
        write_csv(os, rows);
        detail::emit(os.str(), out_path, out);
      }
    }
    return kExitOk;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NotCorrectableError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace teleportsim
