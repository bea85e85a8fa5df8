// designlab: verification suites, closed-form tables, Monte Carlo estimates,
// bound reports and genus censuses, emitted as JSON or CSV.
//
// Exit codes: 0 success, 1 a check failed, 2 configuration error.

#include "designlab/io.hpp"
#include "designlab/verify.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#ifndef DESIGNLAB_VERSION
#define DESIGNLAB_VERSION "0.0.0"
#endif

namespace dl = designlab;
using dl::Json;

namespace {

struct RunConfig {
  std::string command;
  std::uint64_t seed = dl::kDefaultSeed;
  int workers = 1;
  std::string output = "json";
  double tolerance_scale = 1.0;
  std::string out_file;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_null()) return "";
  if (v.is_string()) s = v.get<std::string>();
  else if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  else if (v.is_number_float()) return format_double(v.get<double>());
  else if (v.is_number()) return v.dump();
  else s = v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string to_csv(const std::vector<Json>& rows) {
  std::vector<std::string> cols;
  std::set<std::string> seen;
  for (const auto& r : rows)
    for (const auto& [k, v] : r.items())
      if (seen.insert(k).second) cols.push_back(k);
  std::ostringstream os;
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << (r.contains(cols[i]) ? csv_cell(r[cols[i]]) : "");
    os << "\n";
  }
  return os.str();
}

Json exact_cell(const dl::Rational& q) { return {{"exact", dl::to_string(q)}, {"value", dl::to_double(q)}}; }

// ---- table ----

std::vector<Json> table_choi(const std::vector<int>& alphas, int workers) {
  std::vector<Json> rows;
  for (int a : alphas)
    for (int r = 2; r <= 8; ++r) {
      const int d = r * r;
      const auto p = dl::ChoiPartition::equal(r, r);
      const dl::Rational ex = dl::haar_choi_moment(p, a, workers);
      Json row{{"table", "choi-moments"}, {"dA", r}, {"dB", r}, {"dC", r}, {"dD", r}, {"d", d}, {"alpha", a},
               {"exact", dl::to_string(ex)}, {"value", dl::to_double(ex)}, {"provenance", "exact"}};
      if (a == 2 || a == 3) {
        const dl::Rational closed = a == 2 ? dl::choi_second_moment_closed(d) : dl::choi_third_moment_closed(d);
        row["closed_form"] = dl::to_string(closed);
        row["matches"] = closed == ex;
        row["statement"] = a == 2 ? "Haar Choi second moment 2/(d+1)" : "Haar Choi third moment (5d^3-7d^2-6d+2)/(d^2(d+1)(d^2-4))";
      } else {
        row["statement"] = "Haar Choi moment via Weingarten sum";
      }
      rows.push_back(std::move(row));
    }
  return rows;
}

std::vector<Json> table_state(int dA, int dB, int alpha_max) {
  std::vector<Json> rows;
  for (int a = 2; a <= alpha_max; ++a) {
    const dl::Rational ex = dl::haar_state_moment(dA, dB, a);
    Json row{{"table", "state-moments"}, {"dA", dA}, {"dB", dB}, {"alpha", a}, {"exact", dl::to_string(ex)},
             {"value", dl::to_double(ex)}, {"provenance", "exact"}};
    if (a == 2) {
      row["closed_form"] = dl::to_string(dl::lubkin_purity(dA, dB));
      row["matches"] = dl::lubkin_purity(dA, dB) == ex;
      row["statement"] = "Lubkin purity (dA+dB)/(dA dB+1)";
    } else if (dA == dB && a <= 4) {
      const auto c = dl::state_moment_closed_equal(dA, a);
      row["closed_form"] = dl::to_string(c);
      row["matches"] = c == ex;
      row["statement"] = "explicit equal-split state moment list";
    } else {
      row["statement"] = "Haar state moment via cycle counts";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Json> table_bounds(int workers) {
  std::vector<Json> rows;
  for (int a : {2, 3})
    for (int r = 2; r <= 8; ++r) {
      const int d = r * r;
      const auto b = dl::choi_trace_bound(d, a);
      const dl::Rational ex = dl::haar_choi_moment(dl::ChoiPartition::equal(r, r), a, workers);
      Json row{{"table", "bounds"}, {"d", d}, {"alpha", a}, {"exact", dl::to_string(ex)}, {"value", dl::to_double(ex)},
               {"bound", std::isfinite(b.value) ? Json(b.value) : Json(nullptr)}, {"preconditions_met", b.preconditions_met},
               {"provenance", "bound"}, {"statement", b.location}};
      row["holds"] = !b.preconditions_met || dl::to_double(ex) <= b.value;
      rows.push_back(std::move(row));
    }
  return rows;
}

std::vector<Json> table_gap(int dA, int dB) {
  const auto sp = dl::gap_design_spectrum(dA, dB);
  const dl::Rational lubkin = dl::lubkin_purity(dA, dB);
  std::vector<Json> rows;
  const auto& v = sp.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    rows.push_back({{"table", "gap-design"}, {"dA", dA}, {"dB", dB}, {"index", i + 1}, {"eigenvalue", v[i]},
                    {"provenance", "exact"}, {"statement", "gap 2-design reduced spectrum"}});
  rows.push_back({{"table", "gap-design"}, {"dA", dA}, {"dB", dB}, {"purity", sp.power_trace(2)},
                  {"closed_form", dl::to_string(lubkin)}, {"renyi3_gap_bits", std::log2(dA) - dl::renyi_entropy(sp, 3)},
                  {"provenance", "exact"}, {"statement", "purity equals the Haar value (dA+dB)/(dA dB+1)"}});
  return rows;
}

// ---- mc ----

bool is_design_of_order(const dl::EnsembleSpec& s, int t) {
  switch (s.kind) {
    case dl::EnsembleKind::haar_unitary:
    case dl::EnsembleKind::haar_state: return true;
    case dl::EnsembleKind::clifford: return t <= 3;
    case dl::EnsembleKind::pauli: return t <= 1;
    default: return false;
  }
}

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad dimension list: " + s);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"designlab: exact and sampled entanglement moments of random unitaries and states"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<std::uint64_t> seed_flag;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());
  app.add_option("--seed", seed_flag, "64-bit seed (default: $DESIGNLAB_SEED, else 0xD1CE)");
  app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output", cfg.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tolerance-scale", cfg.tolerance_scale, "multiplies Monte Carlo acceptance bands")->check(CLI::PositiveNumber);
  app.add_option("--out-file", cfg.out_file, "write the report here instead of stdout");
  app.fallthrough();

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  std::string suite = "all";
  verify->add_option("suite", suite)->check(CLI::IsMember({"combinatorics", "weingarten", "moments", "ensembles", "all"}));

  auto* table = app.add_subcommand("table", "closed-form tables");
  std::string table_name;
  std::vector<int> alphas{2, 3};
  int t_dA = 4, t_dB = 4, t_alpha_max = 4;
  table->add_option("name", table_name)->required()->check(CLI::IsMember({"choi-moments", "state-moments", "bounds", "gap-design"}));
  table->add_option("--alpha", alphas, "moment orders (choi-moments)");
  table->add_option("--dA", t_dA);
  table->add_option("--dB", t_dB);
  table->add_option("--alpha-max", t_alpha_max, "largest order (state-moments)");

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate beside the exact Haar reference");
  std::string spec_file, setting = "choi", partition, entropy;
  int mc_alpha = 2, mc_s = 1, mc_dA = 0, mc_dB = 0;
  std::uint64_t n_samples = 20000;
  mc->add_option("spec", spec_file, "ensemble spec JSON file")->required();
  mc->add_option("--setting", setting)->check(CLI::IsMember({"choi", "state"}));
  mc->add_option("--alpha", mc_alpha)->check(CLI::PositiveNumber);
  mc->add_option("--s", mc_s, "power of the trace")->check(CLI::PositiveNumber);
  mc->add_option("--partition", partition, "dA,dB,dC,dD (choi setting)");
  mc->add_option("--dA", mc_dA, "state split");
  mc->add_option("--dB", mc_dB, "state split");
  mc->add_option("-N,--samples", n_samples)->check(CLI::PositiveNumber);
  mc->add_option("--entropy", entropy, "estimate an entropy instead: vn, min or renyi (uses --alpha)")
      ->check(CLI::IsMember({"vn", "min", "renyi"}));

  auto* bounds = app.add_subcommand("bounds", "bounds applicable to a moment query");
  std::string b_setting = "choi", b_partition;
  int b_alpha = 2, b_d = 16, b_dA = 4, b_dB = 4;
  double b_eps = 0, b_lambda = 0;
  bounds->add_option("--setting", b_setting)->check(CLI::IsMember({"choi", "state"}));
  bounds->add_option("--alpha", b_alpha)->check(CLI::PositiveNumber);
  bounds->add_option("--d", b_d, "dimension with equal Choi splits");
  bounds->add_option("--partition", b_partition, "dA,dB,dC,dD");
  bounds->add_option("--dA", b_dA);
  bounds->add_option("--dB", b_dB);
  bounds->add_option("--eps", b_eps, "m-approximate design error");
  bounds->add_option("--lambda", b_lambda, "frame-operator approximation error");

  auto* census = app.add_subcommand("census", "genus census of S_n relative to the full cycle");
  int c_n = 8;
  bool brute = false;
  census->add_option("n", c_n)->check(CLI::Range(1, 40));
  census->add_flag("--brute-force", brute, "enumerate S_n (n <= 10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int exit_code = 0;
  std::vector<Json> rows;
  Json extra = Json::object();
  try {
    if (seed_flag) {
      cfg.seed = *seed_flag;
    } else if (const char* env = std::getenv("DESIGNLAB_SEED")) {
      try {
        cfg.seed = std::stoull(env, nullptr, 0);
      } catch (const std::exception&) {
        throw ConfigError(std::string("DESIGNLAB_SEED is not an integer: ") + env);
      }
    }
    cfg.command = app.get_subcommands().front()->get_name();

    if (*verify) {
      dl::VerifyOptions opt{cfg.seed, cfg.workers, cfg.tolerance_scale};
      for (const auto& c : dl::run_verify(suite, opt)) {
        rows.push_back({{"suite", c.suite}, {"check", c.name}, {"passed", c.passed}, {"detail", c.detail}, {"provenance", c.provenance}});
        if (!c.passed) exit_code = 1;
      }
    } else if (*table) {
      if (table_name == "choi-moments") {
        for (int a : alphas)
          if (a < 1 || a > dl::kMaxChoiDegree) throw ConfigError("choi-moments: alpha must be in [1, 6]");
        rows = table_choi(alphas, cfg.workers);
      } else if (table_name == "state-moments") {
        if (t_alpha_max < 2 || t_alpha_max > dl::kMaxStateDegree) throw ConfigError("state-moments: alpha-max must be in [2, 8]");
        rows = table_state(t_dA, t_dB, t_alpha_max);
      } else if (table_name == "bounds") {
        rows = table_bounds(cfg.workers);
      } else {
        rows = table_gap(t_dA, t_dB);
      }
    } else if (*mc) {
      std::ifstream in(spec_file);
      if (!in) throw ConfigError("cannot open spec file " + spec_file);
      Json j;
      try {
        j = Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed spec JSON: ") + e.what());
      }
      const dl::EnsembleSpec spec = dl::ensemble_from_json(j);
      const std::uint64_t seed = seed_flag || std::getenv("DESIGNLAB_SEED") ? cfg.seed : spec.seed;
      dl::MomentQuery q;
      q.alpha = mc_alpha;
      q.s = mc_s;
      q.setting = setting == "state" ? dl::Setting::state : dl::Setting::choi;
      if (q.setting == dl::Setting::choi) {
        if (partition.empty()) {
          q.choi = spec.default_partition();
        } else {
          const auto v = parse_dims(partition);
          if (v.size() != 4) throw ConfigError("--partition needs four dimensions");
          q.choi = dl::ChoiPartition(v[0], v[1], v[2], v[3]);
        }
      } else {
        if (spec.is_state() && mc_dA == 0) {
          q.dA = spec.dA;
          q.dB = spec.dB;
        } else {
          q.dA = mc_dA;
          q.dB = mc_dB;
        }
      }
      dl::check_query_against(spec, q);
      Json row{{"ensemble", dl::to_json(spec)}, {"setting", setting}, {"alpha", q.alpha}, {"s", q.s}};
      if (q.setting == dl::Setting::choi) row["partition"] = dl::to_json(q.choi);
      else row["split"] = {q.dA, q.dB};
      if (!entropy.empty()) {
        const dl::EntropyOrder order = entropy == "vn" ? dl::EntropyOrder::von_neumann()
                                       : entropy == "min" ? dl::EntropyOrder::min()
                                                          : dl::EntropyOrder::renyi(mc_alpha);
        const auto region = q.setting == dl::Setting::choi ? dl::Region::choi_ac : dl::Region::state_a;
        const auto e = dl::mc_entropy(spec, region, q.choi, q.dA, q.dB, order, n_samples, seed, cfg.workers);
        row["quantity"] = entropy + "-entropy-bits";
        row["estimate"] = dl::to_json(e);
        row["estimate"]["provenance"] = "monte-carlo";
        if (entropy == "vn" && q.setting == dl::Setting::state) {
          const int a = std::min(q.dA, q.dB), b = std::max(q.dA, q.dB);
          const double ref = dl::page_average_entropy(a, b);
          row["reference"] = {{"value", ref}, {"provenance", "exact"}, {"statement", "Page average entanglement entropy"}};
          row["z"] = e.z_score(ref);
        }
      } else {
        const auto e = dl::mc_moment(spec, q, n_samples, seed, cfg.workers);
        row["quantity"] = "trace-power";
        row["estimate"] = dl::to_json(e);
        row["estimate"]["provenance"] = "monte-carlo";
        const int d_rep = q.setting == dl::Setting::choi ? q.choi.d() : q.dA * q.dB;
        std::optional<dl::Rational> ref;
        try {
          ref = dl::exact_moment(q, cfg.workers);
        } catch (const std::exception&) {
          // Reference outside the exact regime; report the estimate alone.
        }
        if (ref) {
          const double r = dl::to_double(*ref);
          Json rj = dl::rational_json(*ref);
          rj["statement"] = "Haar average via Weingarten calculus";
          row["reference"] = rj;
          row["z"] = std::isfinite(e.z_score(r)) ? Json(e.z_score(r)) : Json(e.z_score(r) > 0 ? "inf" : "-inf");
          const bool ok = std::abs(e.z_score(r)) <= 4.0 * cfg.tolerance_scale;
          const int order = q.alpha * q.s;
          if (ok) row["verdict"] = "consistent";
          else if (!is_design_of_order(spec, order)) row["verdict"] = "reference mismatch expected";
          else {
            row["verdict"] = "reference mismatch";
            exit_code = 1;
          }
        } else {
          row["verdict"] = "no exact reference (d = " + std::to_string(d_rep) + ")";
        }
      }
      rows.push_back(std::move(row));
    } else if (*bounds) {
      dl::MomentQuery q;
      q.alpha = b_alpha;
      if (b_setting == "choi") {
        if (!b_partition.empty()) {
          const auto v = parse_dims(b_partition);
          if (v.size() != 4) throw ConfigError("--partition needs four dimensions");
          q.choi = dl::ChoiPartition(v[0], v[1], v[2], v[3]);
        } else {
          const int r = dl::exact_sqrt(b_d);
          if (r < 0) throw ConfigError("--d must be a perfect square; use --partition otherwise");
          q.choi = dl::ChoiPartition::equal(r, r);
        }
      } else {
        q.setting = dl::Setting::state;
        q.dA = b_dA;
        q.dB = b_dB;
      }
      try {
        const dl::Rational ex = dl::exact_moment(q, cfg.workers);
        Json row{{"name", "haar_moment"}, {"statement", "exact Haar moment"}};
        row.update(dl::rational_json(ex));
        rows.push_back(std::move(row));
      } catch (const std::domain_error&) {
      }
      for (const auto& b : dl::bound_suite(q, b_eps, b_lambda)) rows.push_back(dl::to_json(b));
    } else if (*census) {
      const auto c = dl::genus_census(c_n, brute ? dl::CensusMode::brute_force : dl::CensusMode::exact_formula);
      for (const auto& [g, count] : c.counts)
        rows.push_back({{"n", c_n}, {"genus", g}, {"count", count.str()}, {"provenance", "exact"},
                        {"statement", brute ? "enumeration of S_n" : "Goupil-Schaeffer genus count"}});
      extra["total"] = c.total().str();
      extra["catalan"] = dl::catalan(c_n).str();
    }
  } catch (const ConfigError& e) {
    std::cerr << "designlab: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "designlab: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "designlab: " << e.what() << "\n";
    return 2;
  }

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string text;
  if (cfg.output == "json") {
    Json record{{"tool", "designlab"},
                {"version", DESIGNLAB_VERSION},
                {"config",
                 {{"command", cfg.command},
                  {"seed", cfg.seed},
                  {"workers", cfg.workers},
                  {"output", cfg.output},
                  {"tolerance_scale", cfg.tolerance_scale}}},
                {"results", rows},
                {"timestamp", {{"utc", utc_now()}, {"wall_seconds", elapsed}}}};
    if (!extra.empty()) record["summary"] = extra;
    if (cfg.command == "verify") record["passed"] = exit_code == 0;
    text = record.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "# designlab " << DESIGNLAB_VERSION << " command=" << cfg.command << " seed=" << cfg.seed
       << " workers=" << cfg.workers << " timestamp=" << utc_now() << " wall_seconds=" << format_double(elapsed) << "\n";
    for (auto& r : rows)
      if (r.contains("estimate") && r["estimate"].is_object()) {
        for (const auto& [k, v] : r["estimate"].items()) r["estimate_" + k] = v;
        r.erase("estimate");
      }
    os << to_csv(rows);
    text = os.str();
  }
  if (cfg.out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out_file);
    if (!out) {
      std::cerr << "designlab: cannot write " << cfg.out_file << "\n";
      return 2;
    }
    out << text;
  }
  return exit_code;
}
