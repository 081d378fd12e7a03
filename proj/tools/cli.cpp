// Copyright 2026 The mmes Authors
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

#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmes/anneal.hpp"
#include "mmes/canonical.hpp"
#include "mmes/entanglement.hpp"
#include "mmes/errors.hpp"
#include "mmes/partition.hpp"
#include "mmes/qstate.hpp"
#include "mmes/rng.hpp"
#include "mmes/theory.hpp"

namespace mmes::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Output goes to --out when given, else to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback, bool binary = false) : stream_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
    if (!*file_) throw Error("cannot open " + path + " for writing");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

template <class Config>
void validate_flags(const Config& c) {
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

void require_n(const RunConfig& c) {
  require(c.n != 0, "--n is required");
  try {
    check_qubit_count(c.n);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

std::uint64_t resolve_seed(const RunConfig& c, std::ostream& err) {
  const std::uint64_t seed = c.seed ? *c.seed : random_seed();
  err << "seed " << seed << '\n';
  return seed;
}

std::string format_or(const RunConfig& c, const char* fallback) {
  return c.format.empty() ? fallback : c.format;
}

// Shortest representation that round-trips to the same double.
void print_number(std::ostream& out, double x) {
  char buf[32];
  const auto end = std::to_chars(buf, buf + sizeof buf, x).ptr;
  out << std::string_view(buf, end - buf) << '\n';
}

void print_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

EnergySamples read_samples(const std::string& path) {
  require(!path.empty(), "--in is required");
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_samples_csv(in);
}

PureState read_state(const std::string& path) {
  require(!path.empty(), "--in is required");
  return load_state(path);
}

CanonicalConfig canonical_config(const RunConfig& c, std::uint64_t seed) {
  CanonicalConfig cc;
  cc.beta = c.beta.value_or(0.0);
  if (c.steps) cc.steps = *c.steps;
  if (c.burn_in) cc.burn_in = *c.burn_in;
  cc.thin = c.thin;
  cc.seed = seed;
  cc.chains = c.chains;
  cc.threads = c.threads;
  if (c.step_size) cc.step_size = *c.step_size;
  return cc;
}

json profile_json(const PurityProfile& p, int n) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.masks.size(); ++i) {
    rows.push_back({{"mask", p.masks[i]},
                    {"qubits", Bipartition::from_mask(n, p.masks[i]).members()},
                    {"purity", p.purities[i]}});
  }
  return {{"n", n},     {"energy", p.mean}, {"std", p.stddev}, {"min", p.min},
          {"max", p.max}, {"spread", p.spread()}, {"purities", rows}};
}

int run_haar_sample(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_n(c);
  const auto fmt = format_or(c, "json");
  const auto seed = resolve_seed(c, err);
  if (fmt == "csv") {
    require(c.samples >= 1, "--samples must be positive");
    EnergySamples s;
    if (c.partition.empty()) {
      s = typical_samples(c.n, c.samples, seed, c.threads);
    } else {
      const auto b = Bipartition::parse(c.n, c.partition);
      s = typical_purities(c.n, b.mask(), c.samples, seed, c.threads);
    }
    Sink sink(c.out, out);
    write_samples_csv(s, *sink);
    return 0;
  }
  require(c.samples == 1, "--samples > 1 needs --format csv");
  const auto state = haar_sample(c.n, seed);
  if (!c.out.empty()) {
    save_state(state, c.out, fmt == "binary" ? StateFormat::Binary : StateFormat::Json);
  } else if (fmt == "binary") {
    const auto bytes = to_binary(state);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  } else {
    out << to_json(state) << '\n';
  }
  return 0;
}

int run_purity(const RunConfig& c, std::ostream& out) {
  require(!c.partition.empty(), "--partition is required");
  const auto state = read_state(c.in);
  const auto b = Bipartition::parse(state.qubits(), c.partition);
  const double p = purity(state, b);
  Sink sink(c.out, out);
  if (format_or(c, "text") == "json") {
    print_json(*sink, {{"n", state.qubits()}, {"mask", b.mask()}, {"qubits", b.members()}, {"purity", p}});
  } else {
    print_number(*sink, p);
  }
  return 0;
}

int run_profile(const RunConfig& c, std::ostream& out) {
  const auto state = read_state(c.in);
  const auto p = purity_profile(state);
  Sink sink(c.out, out);
  if (format_or(c, "json") == "csv") {
    *sink << "mask,purity\n" << std::setprecision(17);
    for (std::size_t i = 0; i < p.masks.size(); ++i) *sink << p.masks[i] << ',' << p.purities[i] << '\n';
  } else {
    print_json(*sink, profile_json(p, state.qubits()));
  }
  return 0;
}

int run_potential(const RunConfig& c, std::ostream& out) {
  const auto state = read_state(c.in);
  const double e = potential(state);
  Sink sink(c.out, out);
  if (format_or(c, "text") == "json") {
    print_json(*sink, {{"n", state.qubits()}, {"energy", e}});
  } else {
    print_number(*sink, e);
  }
  return 0;
}

int run_canonical(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_n(c);
  require(c.beta.has_value(), "--beta is required");
  const auto seed = resolve_seed(c, err);
  const auto cc = canonical_config(c, seed);
  validate_flags(cc);
  const auto chains = metropolis_chains(c.n, cc);
  const auto summary = samples_summary_json(chains);
  for (const auto& ch : chains) {
    if (!ch.warning.empty()) err << "warning: chain " << ch.chain << ": " << ch.warning << '\n';
  }
  Sink sink(c.out, out);
  if (format_or(c, "csv") == "json") {
    *sink << summary << '\n';
  } else {
    write_samples_csv(pool(chains), *sink);
    (sink.to_file() ? out : err) << summary << '\n';
  }
  return 0;
}

int run_beta_scan(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_n(c);
  require(!c.betas.empty(), "--betas is required");
  const auto seed = resolve_seed(c, err);
  const auto cc = canonical_config(c, seed);
  validate_flags(cc);
  const auto rows = mean_energy_scan(c.n, c.betas, cc);
  Sink sink(c.out, out);
  if (format_or(c, "csv") == "json") {
    json doc = {{"n", c.n}, {"seed", seed}, {"rows", json::array()}};
    for (const auto& r : rows) {
      doc["rows"].push_back({{"beta", r.beta}, {"mean", r.mean}, {"se", r.se}, {"acceptance", r.acceptance}});
    }
    print_json(*sink, doc);
  } else {
    *sink << "beta,mean,se,acceptance\n" << std::setprecision(17);
    for (const auto& r : rows) *sink << r.beta << ',' << r.mean << ',' << r.se << ',' << r.acceptance << '\n';
  }
  return 0;
}

int run_reweight(const RunConfig& c, std::ostream& out) {
  require(c.beta.has_value(), "--beta is required");
  auto samples = read_samples(c.in);
  samples.beta = c.beta0;
  ReweightOptions opts;
  opts.histogram.bins = c.bins;
  const auto r = reweight(samples, *c.beta, opts);
  Sink sink(c.out, out);
  if (format_or(c, "json") == "csv") {
    write_plot_data(r.histogram, *sink);
  } else {
    print_json(*sink, {{"beta0", c.beta0},
                       {"beta", r.beta},
                       {"samples", samples.size()},
                       {"mean", r.mean},
                       {"se", r.se},
                       {"ess", r.ess}});
  }
  return 0;
}

int run_cumulants(const RunConfig& c, std::ostream& out, std::ostream& err) {
  EnergySamples samples;
  json doc;
  if (!c.in.empty()) {
    samples = read_samples(c.in);
    doc["source"] = c.in;
  } else {
    require_n(c);
    const auto seed = resolve_seed(c, err);
    const std::size_t count = c.samples > 1 ? c.samples : 10'000;
    samples = typical_samples(c.n, count, seed, c.threads);
    doc["source"] = "haar";
    doc["n"] = c.n;
    doc["seed"] = seed;
  }
  std::vector<CumulantEstimate> ks;
  try {
    ks = cumulants(samples, c.order);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  doc["samples"] = samples.size();
  doc["cumulants"] = json::array();
  for (const auto& k : ks) doc["cumulants"].push_back({{"order", k.order}, {"value", k.value}, {"se", k.se}});
  Sink sink(c.out, out);
  if (format_or(c, "json") == "csv") {
    *sink << "order,value,se\n" << std::setprecision(17);
    for (const auto& k : ks) *sink << k.order << ',' << k.value << ',' << k.se << '\n';
  } else {
    print_json(*sink, doc);
  }
  return 0;
}

int run_anneal(const RunConfig& c, std::ostream& out, std::ostream& err) {
  require_n(c);
  AnnealSchedule s;
  s.beta_start = c.beta_start;
  s.beta_end = c.beta_end;
  s.levels = c.levels;
  s.sweeps_per_level = c.sweeps;
  s.geometric = !c.linear;
  s.restarts = c.restarts;
  s.polish = !c.no_polish;
  s.threads = c.threads;
  if (c.step_size) s.initial_step = *c.step_size;
  validate_flags(s);
  s.seed = resolve_seed(c, err);
  const auto direction = c.direction == "max" ? Direction::Maximize : Direction::Minimize;
  const auto r = anneal(c.n, s, direction);
  auto doc = json::parse(report_json(r, certify(r)));
  doc["seed"] = s.seed;
  doc["direction"] = c.direction;
  if (!c.state_out.empty()) {
    const bool bin = c.state_out.size() >= 4 && c.state_out.ends_with(".bin");
    save_state(r.state, c.state_out, bin ? StateFormat::Binary : StateFormat::Json);
  }
  Sink sink(c.out, out);
  print_json(*sink, doc);
  return 0;
}

int run_certify(const RunConfig& c, std::ostream& out) {
  const auto state = read_state(c.in);
  Sink sink(c.out, out);
  *sink << report_json(certify(state), state.qubits()) << '\n';
  return 0;
}

int run_theory(const RunConfig& c, std::ostream& out) {
  require_n(c);
  const int n_a = c.n / 2;
  json doc = {{"n", c.n},
              {"n_a", n_a},
              {"mu", typical_mean(c.n)},
              {"sigma2", typical_variance(c.n)},
              {"purity_floor", purity_floor(c.n)},
              {"kappa2_asymptotic", asymptotic_kappa2(c.n)},
              {"kappa2_exponent", asymptotic_kappa2_exponent()}};
  if (c.beta) {
    const auto g = gaussian_prediction(typical_mean(c.n), asymptotic_kappa2(c.n), *c.beta, purity_floor(c.n));
    doc["beta"] = *c.beta;
    doc["gaussian_mean"] = g.mean();
    doc["beta_star"] = g.beta_star();
    doc["gaussian_valid"] = g.valid;
  }
  Sink sink(c.out, out);
  print_json(*sink, doc);
  return 0;
}

int run_hist(const RunConfig& c, std::ostream& out) {
  const auto fmt = format_or(c, "csv");
  require(fmt == "csv", "hist writes csv plot data only");
  auto samples = read_samples(c.in);
  Histogram h;
  if (c.beta) {
    samples.beta = c.beta0;
    ReweightOptions opts;
    opts.histogram.bins = c.bins;
    h = reweight(samples, *c.beta, opts).histogram;
  } else {
    HistogramOptions opts;
    opts.bins = c.bins;
    h = make_histogram(samples.energies, {}, opts);
  }
  Sink sink(c.out, out);
  write_plot_data(h, *sink);
  return 0;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto& cmd = c.command;
  if (cmd == "haar-sample") return run_haar_sample(c, out, err);
  if (cmd == "purity") return run_purity(c, out);
  if (cmd == "profile") return run_profile(c, out);
  if (cmd == "potential") return run_potential(c, out);
  if (cmd == "canonical") return run_canonical(c, out, err);
  if (cmd == "beta-scan") return run_beta_scan(c, out, err);
  if (cmd == "reweight") return run_reweight(c, out);
  if (cmd == "cumulants") return run_cumulants(c, out, err);
  if (cmd == "anneal") return run_anneal(c, out, err);
  if (cmd == "certify") return run_certify(c, out);
  if (cmd == "theory") return run_theory(c, out);
  if (cmd == "hist") return run_hist(c, out);
  throw UsageError("unknown command " + cmd);
}

struct Flags {
  CLI::App* app;
  RunConfig* c;

  Flags& n() {
    app->add_option("--n", c->n, "number of qubits")->check(CLI::Range(2, 64));
    return *this;
  }
  Flags& seed() {
    app->add_option("--seed", c->seed, "RNG seed (random and logged when omitted)");
    return *this;
  }
  Flags& threads() {
    app->add_option("--threads", c->threads, "worker threads (0 = all cores)");
    return *this;
  }
  Flags& io(bool input, const std::vector<std::string>& formats) {
    if (input) app->add_option("--in", c->in, "input file");
    app->add_option("--out", c->out, "output file (default: stdout)");
    if (!formats.empty()) app->add_option("--format", c->format, "output format")->check(CLI::IsMember(formats));
    return *this;
  }
  Flags& beta() {
    app->add_option("--beta", c->beta, "inverse temperature");
    return *this;
  }
  Flags& sampling() {
    app->add_option("--steps", c->steps, "Monte Carlo steps per chain, burn-in included");
    app->add_option("--burn-in", c->burn_in, "discarded steps");
    app->add_option("--thin", c->thin, "record every k-th step")->check(CLI::PositiveNumber);
    app->add_option("--chains", c->chains, "independent chains")->check(CLI::PositiveNumber);
    app->add_option("--step-size", c->step_size, "initial proposal scale")->check(CLI::PositiveNumber);
    return *this;
  }
  Flags& bins() {
    app->add_option("--bins", c->bins, "histogram bins")->check(CLI::PositiveNumber);
    return *this;
  }
};

std::unique_ptr<CLI::App> make_app(RunConfig& c) {
  auto app = std::make_unique<CLI::App>("Multipartite entanglement: purities, canonical sampling, MMES search",
                                        "mmes");
  app->require_subcommand(1);
  app->fallthrough(false);
  auto sub = [&](const char* name, const char* help) {
    auto* s = app->add_subcommand(name, help);
    s->callback([&c, name] { c.command = name; });
    return Flags{s, &c};
  };

  auto haar = sub("haar-sample", "draw Haar-random states (state file, or energies with --format csv)");
  haar.n().seed().threads().io(false, {"json", "binary", "csv"});
  haar.app->add_option("--samples", c.samples, "number of states for csv output")->check(CLI::PositiveNumber);
  haar.app->add_option("--partition", c.partition, "record this bipartition's purity instead of H");

  auto pur = sub("purity", "purity of one bipartition of a stored state");
  pur.io(true, {"text", "json"});
  pur.app->add_option("--partition", c.partition, "qubit list (0,2) or mask (mask:5, 0b101, 0x5)");

  sub("profile", "purities of all balanced bipartitions").io(true, {"json", "csv"});
  sub("potential", "potential H of a stored state").io(true, {"text", "json"});

  sub("canonical", "Metropolis sampling of exp(-beta H)").n().beta().sampling().seed().threads().io(false, {"csv", "json"});

  auto scan = sub("beta-scan", "mean energy over a list of beta values");
  scan.n().sampling().seed().threads().io(false, {"csv", "json"});
  scan.app->add_option("--betas", c.betas, "comma-separated inverse temperatures")->delimiter(',');

  auto rw = sub("reweight", "reweight samples from --beta0 to --beta");
  rw.beta().bins().io(true, {"json", "csv"});
  rw.app->add_option("--beta0", c.beta0, "inverse temperature the input was sampled at");

  auto cum = sub("cumulants", "cumulants of sampled energies (input csv, or Haar samples at --n)");
  cum.n().seed().threads().io(true, {"json", "csv"});
  cum.app->add_option("--order", c.order, "highest cumulant order")->check(CLI::Range(1, 4));
  cum.app->add_option("--samples", c.samples, "Haar samples when no --in is given")->check(CLI::PositiveNumber);

  auto an = sub("anneal", "simulated annealing search for extremal H");
  an.n().seed().threads().io(false, {"json"});
  an.app->add_option("--restarts", c.restarts, "independent restarts")->check(CLI::PositiveNumber);
  an.app->add_option("--beta-start", c.beta_start, "first inverse temperature");
  an.app->add_option("--beta-end", c.beta_end, "last inverse temperature");
  an.app->add_option("--levels", c.levels, "temperature levels");
  an.app->add_option("--sweeps", c.sweeps, "proposals per level");
  an.app->add_flag("--linear", c.linear, "linear instead of geometric ladder");
  an.app->add_flag("--no-polish", c.no_polish, "skip the gradient polish");
  an.app->add_option("--step-size", c.step_size, "initial proposal scale")->check(CLI::PositiveNumber);
  an.app->add_option("--direction", c.direction, "min or max")->check(CLI::IsMember({"min", "max"}));
  an.app->add_option("--state-out", c.state_out, "write the best state (.bin = binary, else json)");

  sub("certify", "minimality certificate for a stored state").io(true, {"json"});

  auto th = sub("theory", "closed-form typical-state moments").n().beta();
  th.io(false, {"json"});

  auto hi = sub("hist", "histogram plot data of sampled energies").bins().beta().io(true, {"csv"});
  hi.app->add_option("--beta0", c.beta0, "inverse temperature the input was sampled at");
  return app;
}

const CLI::App* active(const CLI::App& app) {
  for (const auto* s : app.get_subcommands()) return s;
  return &app;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  auto app = make_app(c);
  try {
    app->parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << active(*app)->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app->help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << active(*app)->help();
    return 2;
  }
  try {
    return run(c, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << active(*app)->help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"mmes"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mmes::cli
