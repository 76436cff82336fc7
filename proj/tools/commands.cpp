#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "fairdiv/lowerbound.hpp"
#include "fairdiv/opt.hpp"
#include "verify.hpp"

namespace fairdiv::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << '\n';
    return kContractViolation;
  }
}

void write_allocations_csv(std::ostream& out, const RunResult& result) {
  out << 't';
  for (std::size_t i = 0; i < result.spec.n; ++i) {
    for (std::size_t k = 0; k < result.spec.m; ++k) out << ",x_" << i << '_' << k;
  }
  out << '\n';
  for (std::size_t t = 0; t < result.allocations.size(); ++t) {
    out << t;
    for (double v : result.allocations[t].values()) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

void write_run_csv(std::ostream& out, const RunResult& result) {
  out << kRunCsvHeader << '\n';
  for (const auto& r : result.rounds) {
    out << r.t << ',' << r.item << ',' << r.player << ',' << format_double(r.value) << ','
        << format_double(r.regret_inc) << ',' << format_double(r.cum_regret) << ','
        << format_double(r.min_slack) << ',' << (r.in_box ? 1 : 0) << '\n';
  }
}

int cmd_run(const std::filesystem::path& config_path, std::ostream& err) {
  return guarded(err, [&] {
    const auto config = load_config(config_path);
    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    try {
      result = run(config.spec, config.policy, RunOptions{config.record_full_allocations});
    } catch (const std::invalid_argument& e) {
      // Inputs were validated already, so anything here is an internal failure.
      throw ContractViolation(e.what());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    {
      auto csv = open_output(config.output_dir / "run.csv");
      write_run_csv(csv, result);
    }
    if (config.record_full_allocations) {
      auto csv = open_output(config.output_dir / "allocations.csv");
      write_allocations_csv(csv, result);
    }
    const auto s = summarize(result);
    nlohmann::json summary;
    summary["artifact_version"] = kArtifactVersion;
    summary["policy"] = std::string(to_string(result.policy));
    summary["rounds"] = result.rounds.size();
    summary["exploration_rounds"] = result.exploration_rounds;
    summary["optimal_welfare"] = result.optimal_welfare;
    summary["final_regret"] = s.final_regret;
    summary["max_violation"] = s.max_violation;
    summary["disproportionality"] = s.disproportionality;
    summary["event_e_fraction"] = s.event_e_fraction;
    summary["wall_time_seconds"] = wall;
    summary["config"] = config_echo(config);
    auto js = open_output(config.output_dir / "summary.json");
    js << summary.dump(2) << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const SweepArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const auto base = load_config(args.config);
    if (args.values.empty()) throw ConfigError("sweep: --values must list at least one value");
    if (args.seeds == 0) throw ConfigError("sweep: --seeds must be >= 1");

    std::vector<BatchCase> cases;
    for (const auto& value : args.values) {
      RunConfig c = base;
      if (args.param == "T") {
        std::size_t T = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), T);
        if (ec != std::errc() || ptr != value.data() + value.size()) throw ConfigError("sweep: bad T value '" + value + "'");
        c.spec.T = T;
      } else if (args.param == "noise_sigma") {
        double sigma = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), sigma);
        if (ec != std::errc() || ptr != value.data() + value.size()) {
          throw ConfigError("sweep: bad noise_sigma value '" + value + "'");
        }
        c.spec.noise_sigma = sigma;
      } else if (args.param == "policy.kind") {
        auto kind = parse_policy_kind(value);
        if (!kind) throw ConfigError("sweep: unknown policy '" + value + "'");
        c.policy.kind = *kind;
      } else {
        throw ConfigError("sweep: --param must be one of T, noise_sigma, policy.kind (got '" + args.param + "')");
      }
      revalidate(c);
      cases.push_back({c.spec, c.policy});
    }

    std::vector<std::uint64_t> seeds;
    for (std::size_t s = 0; s < args.seeds; ++s) seeds.push_back(base.spec.seed + s);
    const auto rows = batch(cases, seeds, args.workers);

    auto csv = open_output(base.output_dir / "sweep.csv");
    csv << "param,value,seed,row,final_regret,max_violation,disproportionality,event_e_fraction,error\n";
    int status = kOk;
    for (std::size_t c = 0; c < cases.size(); ++c) {
      std::vector<double> regret, violation, dispro, event_e;
      for (std::size_t s = 0; s < seeds.size(); ++s) {
        const auto& row = rows[c * seeds.size() + s];
        csv << args.param << ',' << args.values[c] << ',' << row.seed << ",run,";
        if (row.summary) {
          const auto& sm = *row.summary;
          csv << format_double(sm.final_regret) << ',' << format_double(sm.max_violation) << ','
              << format_double(sm.disproportionality) << ',' << format_double(sm.event_e_fraction) << ",\n";
          regret.push_back(sm.final_regret);
          violation.push_back(sm.max_violation);
          dispro.push_back(sm.disproportionality);
          event_e.push_back(sm.event_e_fraction);
        } else {
          std::string msg = row.error;
          std::replace(msg.begin(), msg.end(), ',', ';');
          std::replace(msg.begin(), msg.end(), '\n', ' ');
          csv << ",,,," << msg << '\n';
          err << "sweep: " << args.param << '=' << args.values[c] << " seed " << row.seed << ": " << row.error << '\n';
          status = kContractViolation;
        }
      }
      csv << args.param << ',' << args.values[c] << ",,median,";
      if (regret.empty()) {
        csv << ",,,,\n";
      } else {
        csv << format_double(median(regret)) << ',' << format_double(median(violation)) << ','
            << format_double(median(dispro)) << ',' << format_double(median(event_e)) << ",\n";
      }
    }
    return status;
  });
}

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    err << "unknown suite '" << suite << "'; expected one of lp, lemmas, robust, lowerbound\n";
    return kConfigError;
  }
  const auto report = run_suite(suite);
  out << report.dump(2) << '\n';
  if (!report.value("passed", false)) {
    err << "verify: suite '" << suite << "' failed\n";
    return kContractViolation;
  }
  return kOk;
}

int cmd_lowerbound(const LowerboundArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto kind = parse_policy_kind(args.policy);
    if (!kind) throw ConfigError("lowerbound: unknown policy '" + args.policy + "'");
    if (args.seeds == 0) throw ConfigError("lowerbound: --seeds must be >= 1");
    const auto pair = lb_instances(args.T);

    PolicyConfig policy;
    policy.kind = *kind;
    policy.warmup_scale = args.warmup_scale;
    policy.grid_cap = args.grid_cap;

    std::vector<int> instances = {1};
    if (validate_means(pair.mu2, kLbLowerValue, kLbUpperValue).empty()) {
      instances.push_back(2);
    } else {
      err << "lowerbound: mu2 leaves [1/42, 40/42] at T = " << args.T << " (epsilon = " << pair.epsilon
          << "); reporting mu1 only\n";
    }

    std::ostringstream body;
    body << "instance,seed,statistic,final_regret\n";
    for (int which : instances) {
      for (std::size_t seed = 0; seed < args.seeds; ++seed) {
        const auto spec = lb_spec(pair, which, args.noise_sigma, seed);
        const auto result = run(spec, policy, RunOptions{true});
        body << "mu" << which << ',' << seed << ',' << format_double(lb_statistic(result)) << ','
             << format_double(result.rounds.empty() ? 0.0 : result.rounds.back().cum_regret) << '\n';
      }
    }
    if (args.out) {
      auto file = open_output(*args.out);
      file << body.str();
    } else {
      out << body.str();
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace fairdiv::cli
