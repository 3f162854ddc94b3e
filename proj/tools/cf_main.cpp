#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "cf/combinat.hpp"
#include "cf/errors.hpp"
#include "cf/io.hpp"
#include "cf/ito.hpp"
#include "verify_suites.hpp"

namespace {

using nlohmann::ordered_json;

// shortest round-trip decimal, identical across runs for identical values
std::string jnum(double v) { return ordered_json(v).dump(); }

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

ordered_json check_to_json(const cfcli::CheckResult& c) {
  ordered_json o;
  o["check"] = c.name;
  o["pass"] = c.pass;
  for (const auto& [k, v] : c.values.items()) o[k] = v;
  return o;
}

std::string values_inline(const ordered_json& values) {
  std::string s;
  for (const auto& [k, v] : values.items()) {
    if (!s.empty()) s += ", ";
    s += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  }
  return s;
}

int emit_verify(const std::string& suite, const std::vector<cfcli::CheckResult>& checks,
                const std::string& format) {
  bool all = true;
  for (const auto& c : checks) all = all && c.pass;

  if (format == "json") {
    ordered_json doc;
    doc["command"] = "verify";
    doc["suite"] = suite;
    doc["pass"] = all;
    doc["checks"] = ordered_json::array();
    for (const auto& c : checks) doc["checks"].push_back(check_to_json(c));
    std::cout << doc.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "check,pass,detail\n";
    for (const auto& c : checks)
      std::cout << c.name << "," << (c.pass ? "true" : "false") << ","
                << csv_quote(values_inline(c.values)) << "\n";
  } else {
    for (const auto& c : checks)
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " ("
                << values_inline(c.values) << ")\n";
    std::cout << "suite " << suite << ": " << (all ? "PASS" : "FAIL") << "\n";
  }
  return all ? 0 : 1;
}

cf::FieldModel builtin_quartic() {
  return cf::make_field_model({"x"}, {{1.0}}, {{{0, 0, 0, 0}, -0.6}});
}

struct TableData {
  bool triangle = false;
  std::vector<std::vector<cf::BigInt>> rows;  // triangle kinds, row k has k entries
  std::vector<cf::BigInt> seq;                // sequence kinds, n = 1..n_max
};

TableData build_table(const std::string& kind, int n) {
  TableData t;
  if (kind == "stirling1" || kind == "stirling2") {
    t.triangle = true;
    for (int k = 1; k <= n; ++k)
      t.rows.push_back(kind == "stirling1" ? cf::stirling_first_row(k)
                                           : cf::stirling_second_row(k));
  } else if (kind == "bell") {
    for (int k = 1; k <= n; ++k) t.seq.push_back(cf::bell(k));
  } else if (kind == "hierarchies") {
    for (int k = 1; k <= n; ++k) t.seq.push_back(cf::hierarchy_count(k));
  } else {
    for (int k = 1; k <= n; ++k) t.seq.push_back(cf::pair_partition_count(k));
  }
  return t;
}

int emit_table(const std::string& kind, int n, const TableData& t,
               const std::string& format) {
  if (format == "json") {
    ordered_json doc;
    doc["command"] = "tables";
    doc["kind"] = kind;
    doc["n"] = n;
    if (t.triangle) {
      doc["rows"] = ordered_json::array();
      for (const auto& row : t.rows) {
        ordered_json r = ordered_json::array();
        for (const auto& v : row) r.push_back(v.str());  // arbitrary precision as text
        doc["rows"].push_back(r);
      }
    } else {
      doc["values"] = ordered_json::array();
      for (const auto& v : t.seq) doc["values"].push_back(v.str());
    }
    std::cout << doc.dump(2) << "\n";
  } else if (format == "csv") {
    if (t.triangle) {
      std::cout << "n,m,value\n";
      for (size_t k = 0; k < t.rows.size(); ++k)
        for (size_t m = 0; m < t.rows[k].size(); ++m)
          std::cout << k + 1 << "," << m + 1 << "," << t.rows[k][m].str() << "\n";
    } else {
      std::cout << "n,value\n";
      for (size_t k = 0; k < t.seq.size(); ++k)
        std::cout << k + 1 << "," << t.seq[k].str() << "\n";
    }
  } else {
    if (t.triangle) {
      for (size_t k = 0; k < t.rows.size(); ++k) {
        std::cout << k + 1 << ":";
        for (const auto& v : t.rows[k]) std::cout << " " << v.str();
        std::cout << "\n";
      }
    } else {
      for (const auto& v : t.seq) std::cout << v.str() << (&v == &t.seq.back() ? "" : " ");
      std::cout << "\n";
    }
  }
  return 0;
}

int emit_scalar_report(const ordered_json& doc, const std::string& format) {
  if (format == "json") {
    std::cout << doc.dump(2) << "\n";
  } else if (format == "csv") {
    std::string head, row;
    for (const auto& [k, v] : doc.items()) {
      if (k == "command") continue;
      if (!head.empty()) {
        head += ",";
        row += ",";
      }
      head += k;
      row += v.is_string() ? v.get<std::string>() : v.dump();
    }
    std::cout << head << "\n" << row << "\n";
  } else {
    for (const auto& [k, v] : doc.items()) {
      if (k == "command") continue;
      std::cout << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
  return doc.at("pass").get<bool>() ? 0 : 1;
}

int emit_convergence(const cf::ConvergenceReport& rep, const std::string& format) {
  if (format == "json") {
    ordered_json doc;
    doc["command"] = "simulate";
    doc["check"] = rep.check;
    doc["n"] = rep.n;
    doc["steps"] = rep.steps;
    doc["median_abs_error"] = rep.median_abs_error;
    doc["paths"] = rep.paths;
    doc["seed"] = rep.seed;
    doc["pass"] = rep.pass;
    std::cout << doc.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "steps,median_abs_error\n";
    for (size_t i = 0; i < rep.steps.size(); ++i)
      std::cout << rep.steps[i] << "," << jnum(rep.median_abs_error[i]) << "\n";
  } else {
    std::cout << "check " << rep.check << " n=" << rep.n << " paths=" << rep.paths
              << " seed=" << rep.seed << "\n";
    std::cout << "steps  median_abs_error\n";
    for (size_t i = 0; i < rep.steps.size(); ++i)
      std::cout << rep.steps[i] << "  " << jnum(rep.median_abs_error[i]) << "\n";
    std::cout << "pass: " << (rep.pass ? "true" : "false") << "\n";
  }
  return rep.pass ? 0 : 1;
}

ordered_json stochastic_to_json(const cf::StochasticReport& r) {
  ordered_json doc;
  doc["command"] = "simulate";
  doc["check"] = r.check;
  doc["target"] = r.target;
  doc["estimate"] = r.estimate;
  doc["stderr"] = r.stderr_est;
  doc["paths"] = r.paths;
  doc["seed"] = r.seed;
  doc["retried"] = r.retried;
  doc["pass"] = r.pass;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"combinatorial tables, identity verification, and path simulations"};
  app.require_subcommand(1);

  std::string format = "text";
  bool json_flag = false;
  auto add_format = [&](CLI::App* cmd) {
    auto* f = cmd->add_option("--format", format, "output format")
                  ->check(CLI::IsMember({"text", "json", "csv"}));
    cmd->add_flag("--json", json_flag, "shorthand for --format json")->excludes(f);
  };

  auto* tables = app.add_subcommand("tables", "print exact combinatorial tables");
  std::string table_kind;
  int table_n = 0;
  tables->add_option("kind", table_kind, "which table")
      ->required()
      ->check(CLI::IsMember({"stirling1", "stirling2", "bell", "hierarchies", "pairings"}));
  tables->add_option("--n", table_n, "largest order to print")->required();
  add_format(tables);

  auto* verify = app.add_subcommand("verify", "run a deterministic identity suite");
  std::string suite;
  std::string model_path;
  double ds_tolerance = 1e-4;
  verify->add_option("suite", suite, "which suite")
      ->required()
      ->check(CLI::IsMember({"moments", "fock", "fields", "arith"}));
  verify->add_option("--model", model_path, "field model JSON (fields suite)");
  verify->add_option("--tolerance", ds_tolerance,
                     "equation-of-motion residual tolerance (fields suite)");
  add_format(verify);

  auto* simulate = app.add_subcommand("simulate", "run a seeded stochastic check");
  std::string sim_check;
  std::uint64_t seed = 0;
  int sim_n = -1;
  long long paths = -1;
  int steps = 10000;
  double z = 0.5, t_end = 1.0;
  std::string kind = "wiener";
  simulate->add_option("check", sim_check, "which check")
      ->required()
      ->check(CLI::IsMember({"hermite", "charlier", "martingale"}));
  auto* seed_opt =
      simulate->add_option("--seed", seed, "RNG root seed")->envname("CF_SEED");
  simulate->add_option("--n", sim_n, "chaos order");
  simulate->add_option("--paths", paths, "sample paths");
  simulate->add_option("--steps", steps, "finest grid steps");
  simulate->add_option("--z", z, "martingale parameter");
  simulate->add_option("--t", t_end, "time horizon");
  simulate->add_option("--kind", kind, "martingale family")
      ->check(CLI::IsMember({"wiener", "poisson", "general"}));
  add_format(simulate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (json_flag) format = "json";

  try {
    if (tables->parsed()) {
      const int cap = table_kind == "hierarchies" ? 30 : 200;
      if (table_n < 1 || table_n > cap) {
        std::cerr << "tables " << table_kind << " supports --n in 1.." << cap << "\n";
        return 2;
      }
      return emit_table(table_kind, table_n, build_table(table_kind, table_n), format);
    }

    if (verify->parsed()) {
      std::vector<cfcli::CheckResult> checks;
      if (suite == "moments") checks = cfcli::verify_moments();
      else if (suite == "fock") checks = cfcli::verify_fock();
      else if (suite == "arith") checks = cfcli::verify_arith();
      else {
        cf::FieldModel m =
            model_path.empty() ? builtin_quartic() : cf::load_model_json(model_path);
        checks = cfcli::verify_fields(m, ds_tolerance);
      }
      return emit_verify(suite, checks, format);
    }

    // simulate
    if (seed_opt->count() == 0) {
      std::cerr << "simulate needs --seed or the CF_SEED environment variable\n";
      return 2;
    }

    if (sim_check == "hermite") {
      if (sim_n < 0) sim_n = 3;
      if (paths < 0) paths = 100;
      auto rep = cf::hermite_convergence_check(sim_n, steps, paths, seed);
      return emit_convergence(rep, format);
    }

    if (sim_check == "charlier") {
      if (sim_n < 0) sim_n = 4;
      if (paths < 0) paths = 100000;
      // exact polynomial identity on sampled jump configurations, then the
      // zero-mean gate on the same order
      const int configs = 1000;
      cf::Rng root(seed);
      bool exact_ok = true;
      for (int i = 0; i < configs; ++i) {
        auto j = cf::sample_poisson(t_end, root.sub("exact").sub(std::uint64_t(i)));
        for (int k = 0; k <= sim_n && exact_ok; ++k)
          exact_ok = cf::offdiag_poisson_exact(j.count(), cf::Rational(t_end), k) ==
                     cf::charlier_exact(k, cf::Rational(j.count()), cf::Rational(t_end));
        if (!exact_ok) break;
      }
      auto rep = cf::poisson_offdiag_martingale_check(sim_n, t_end, paths, seed);
      ordered_json doc = stochastic_to_json(rep);
      doc["pass"] = rep.pass && exact_ok;
      ordered_json merged;
      merged["command"] = "simulate";
      merged["check"] = rep.check;
      merged["n"] = sim_n;
      merged["t"] = t_end;
      merged["exact_identity_configs"] = configs;
      merged["exact_identity_pass"] = exact_ok;
      for (const auto& [k, v] : doc.items())
        if (k != "command" && k != "check") merged[k] = v;
      return emit_scalar_report(merged, format);
    }

    // martingale
    if (paths < 0) paths = 100000;
    cf::MartingaleKind mk = kind == "wiener"    ? cf::MartingaleKind::wiener
                            : kind == "poisson" ? cf::MartingaleKind::poisson
                                                : cf::MartingaleKind::general;
    auto rep = cf::exponentiated_martingale_check(mk, z, t_end, paths, seed);
    ordered_json doc = stochastic_to_json(rep);
    ordered_json merged;
    merged["command"] = "simulate";
    merged["check"] = rep.check;
    merged["kind"] = kind;
    merged["z"] = z;
    merged["t"] = t_end;
    for (const auto& [k, v] : doc.items())
      if (k != "command" && k != "check") merged[k] = v;
    return emit_scalar_report(merged, format);
  } catch (const cf::diagnostic_error& e) {
    std::cerr << "diagnostic: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
