#pragma once

// Command-line front end. dispatch() takes the arguments after the program name
// and returns the process exit code: 0 success, 1 failed audit, 2 usage error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qha/asymptotics.hpp"
#include "qha/core_groups.hpp"
#include "qha/csv.hpp"
#include "qha/errors.hpp"
#include "qha/qha_conv.hpp"
#include "qha/uniform_tauberian.hpp"
#include "qha/weyl_system.hpp"
#include "qha/wiener_regularity.hpp"

namespace qha::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAudit = 1;
inline constexpr int kExitUsage = 2;

/// Stdout summaries use 15 digits; CSV files keep 17.
inline std::string summary_real(double v) { return format_real(v, 15); }

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::optional<std::string> manifest_comment;
  std::vector<std::string> written;

  void write(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows) {
    emit_csv(path, header, rows, manifest_comment);
    written.push_back(path);
  }

  /// CSV to --out when given, otherwise to stdout.
  void table(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows) {
    if (!path.empty())
      write(path, header, rows);
    else
      out << render_csv(header, rows);
  }
};

/// Subcommands that draw random samples and so take a mandatory --seed.
inline bool takes_seed(const std::string& name) { return name == "conv audit" || name == "wiener verify"; }

namespace detail {

inline std::vector<long> k_grid(const std::string& arg, std::size_t full) {
  std::vector<long> out;
  if (arg == "all") {
    for (std::size_t i = 0; i < full; ++i) out.push_back(static_cast<long>(i));
    return out;
  }
  if (arg.rfind("grid:", 0) != 0) throw precondition_error("--k must be 'all' or 'grid:M', got '" + arg + "'");
  const long m = parse_integer(arg.substr(5));
  if (m < 1) throw precondition_error("grid:M needs M >= 1");
  for (long i = 0; i < m; ++i) out.push_back(i);
  return out;
}

inline std::vector<ZSequence> read_family_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw precondition_error("family directory '" + dir + "' does not exist");
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw precondition_error("family directory '" + dir + "' holds no .csv files");
  std::vector<ZSequence> fam;
  for (const auto& f : files) fam.push_back(read_zsequence(f));
  return fam;
}

inline std::string sibling_path(const std::string& path, const std::string& tag) {
  const std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + "." + tag + p.extension().string())).string();
}

}  // namespace detail

int run_manifest(const std::string& path, std::ostream& out, std::ostream& err);

inline int dispatch_in(const std::vector<std::string>& args, Context& ctx) {
  CLI::App app{"Finite-dimensional quantum harmonic analysis toolkit", "qha"};
  app.require_subcommand(1);
  app.fallthrough(false);
  std::function<int()> action;

  // group dft | conv
  auto* group = app.add_subcommand("group", "Fourier transform and convolution on finite abelian groups");
  group->require_subcommand(1);
  std::vector<int> orders;
  double weight = 1.0;
  std::string in_path, out_path, f_path, g_path;
  {
    auto* dft = group->add_subcommand("dft", "Fourier transform of an index,re,im table");
    dft->add_option("--orders", orders, "cyclic factor orders, e.g. 2,4")->required()->delimiter(',');
    dft->add_option("--weight", weight, "Haar weight per point");
    dft->add_option("--in", in_path, "input CSV")->required();
    dft->add_option("--out", out_path, "output CSV")->required();
    dft->callback([&] {
      action = [&] {
        const FiniteAbelianGroup g(orders, weight);
        ctx.write(out_path, {"index", "re", "im"}, group_function_rows(fourier(read_group_function(in_path, g))));
        return kExitOk;
      };
    });
    auto* conv = group->add_subcommand("conv", "convolution of two index,re,im tables");
    conv->add_option("--orders", orders, "cyclic factor orders")->required()->delimiter(',');
    conv->add_option("--weight", weight, "Haar weight per point");
    conv->add_option("--f", f_path, "first factor CSV")->required();
    conv->add_option("--g", g_path, "second factor CSV")->required();
    conv->add_option("--out", out_path, "output CSV")->required();
    conv->callback([&] {
      action = [&] {
        const FiniteAbelianGroup g(orders, weight);
        ctx.write(out_path, {"index", "re", "im"},
                  group_function_rows(convolve(read_group_function(f_path, g), read_group_function(g_path, g))));
        return kExitOk;
      };
    });
  }

  // weyl check
  int n = 0;
  auto* weyl_cmd = app.add_subcommand("weyl", "Weyl system identities");
  weyl_cmd->require_subcommand(1);
  {
    auto* check = weyl_cmd->add_subcommand("check", "exhaustive identity residuals on Z_N x Z_N");
    check->add_option("--n", n, "N")->required()->check(CLI::Range(1, 64));
    check->add_option("--out", out_path, "output CSV (default stdout)");
    check->callback([&] {
      action = [&] {
        int code = kExitOk;
        std::vector<CsvRow> rows;
        for (const auto& r : weyl_identity_residuals(PhaseSpace(n))) {
          const bool ok = r.max_residual <= 1e-12;
          if (!ok) code = kExitAudit;
          rows.push_back({r.name, format_real(r.max_residual), ok ? "PASS" : "FAIL"});
        }
        ctx.table(out_path, {"identity", "max_residual", "status"}, rows);
        return code;
      };
    });
  }

  // conv audit
  std::size_t samples = 200;
  std::uint64_t seed = 0;
  auto* conv_cmd = app.add_subcommand("conv", "convolution norm estimates");
  conv_cmd->require_subcommand(1);
  {
    auto* audit = conv_cmd->add_subcommand("audit", "randomized audit of the four norm inequalities");
    audit->add_option("--n", n, "N")->required()->check(CLI::Range(1, 32));
    audit->add_option("--samples", samples, "number of random samples")->check(CLI::PositiveNumber);
    audit->add_option("--seed", seed, "random seed")->required();
    audit->add_option("--out", out_path, "output CSV (default stdout)");
    audit->callback([&] {
      action = [&] {
        const auto rep = verify_norm_estimates(samples, n, seed);
        std::vector<CsvRow> rows;
        for (const auto& i : rep.inequalities)
          rows.push_back({i.name, format_real(i.max_ratio), std::to_string(i.argmax_sample)});
        ctx.table(out_path, {"inequality", "max_ratio", "argmax_seed_index"}, rows);
        return rep.all_hold() ? kExitOk : kExitAudit;
      };
    });
  }

  // wiener verify
  bool degenerate = false;
  auto* wiener = app.add_subcommand("wiener", "Wiener approximation predicates");
  wiener->require_subcommand(1);
  {
    auto* verify = wiener->add_subcommand("verify", "compare the rank and zero-set predicates");
    verify->add_option("--n", n, "N")->required()->check(CLI::Range(1, 12));
    verify->add_option("--samples", samples, "number of random operators");
    verify->add_option("--seed", seed, "random seed")->required();
    verify->add_flag("--degenerate", degenerate, "also test the fixed degenerate set");
    verify->add_option("--out", out_path, "output CSV (default stdout)");
    verify->callback([&] {
      action = [&] {
        const auto cases = wiener_audit(n, samples, seed, degenerate);
        std::vector<CsvRow> rows;
        bool all = true;
        for (const auto& c : cases) {
          all = all && c.report.agreement;
          rows.push_back({c.name, format_real(c.report.min_abs_transform), std::to_string(c.report.translate_span_rank),
                          c.report.is_regular ? "true" : "false", c.report.agreement ? "true" : "false"});
        }
        ctx.table(out_path, {"case", "min_abs_transform", "rank", "is_regular", "agreement"}, rows);
        return all ? kExitOk : kExitAudit;
      };
    });
  }

  // example halmos | cac
  long blocks = 40;
  double h = 0.05, xmax = 20.0;
  long nmax = 4;
  auto* example = app.add_subcommand("example", "worked examples on Z and R");
  example->require_subcommand(1);
  {
    auto* halmos = example->add_subcommand("halmos", "block-projection operator diagnostics");
    halmos->add_option("--blocks", blocks, "number of blocks K")->check(CLI::Range(1L, 120L));
    halmos->add_option("--out", out_path, "output CSV (default stdout)");
    halmos->callback([&] {
      action = [&] {
        const HalmosSummary s = halmos_diagnostics(blocks);
        std::vector<CsvRow> rows = {
            {"blocks", std::to_string(s.blocks)},
            {"window_size", std::to_string(s.window_size)},
            {"unit_singular_values", std::to_string(s.unit_singular_values)},
            {"nonzero_singular_values", std::to_string(s.nonzero_singular_values)},
            {"max_column_norm_error", format_real(s.max_column_norm_error)},
            {"max_row_norm_error", format_real(s.max_row_norm_error)},
            {"b0_margin", std::to_string(s.b0_margin)},
            {"b0_max_outer_column", format_real(s.b0.max_outer_column)},
            {"b0_max_outer_row", format_real(s.b0.max_outer_row)},
            {"b0_consistent", s.b0.consistent ? "1" : "0"}};
        std::vector<long> sizes;
        for (long k : {blocks / 4, blocks / 2, blocks})
          if (k >= 1 && (sizes.empty() || k > sizes.back())) sizes.push_back(k);
        const auto proxy = compactness_proxy([](long k) { return halmos_operator(k); }, sizes, 0.9);
        for (std::size_t i = 0; i < sizes.size(); ++i)
          rows.push_back({"proxy_count_K" + std::to_string(sizes[i]), std::to_string(proxy.counts[i])});
        rows.push_back({"proxy_trend", to_string(proxy.trend)});
        ctx.table(out_path, {"param", "value"}, rows);
        const bool ok = s.unit_singular_values == static_cast<std::size_t>(blocks) && s.max_column_norm_error < 1e-12;
        return ok ? kExitOk : kExitAudit;
      };
    });
    auto* cac = example->add_subcommand("cac", "box convolution sandwich example on a grid");
    cac->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
    cac->add_option("--h", h, "grid step")->check(CLI::PositiveNumber);
    cac->add_option("--nmax", nmax, "largest block index n")->check(CLI::PositiveNumber);
    cac->add_option("--xmax", xmax, "right end of the grid [0, xmax]");
    cac->add_option("--out", out_path, "output CSV (default stdout)");
    cac->callback([&] {
      action = [&] {
        const CacExample ex = cac_example(h, nmax, xmax);
        const CacRecord& r = ex.record;
        std::vector<CsvRow> rows = {{"h", format_real(r.h)},
                                    {"n_max", std::to_string(r.n_max)},
                                    {"projection_defect", format_real(r.projection_defect)},
                                    {"g_max_error", format_real(r.g_max_error)},
                                    {"g_within_2h", r.g_within_2h ? "1" : "0"},
                                    {"plateau_max_deviation", format_real(r.plateau_max_deviation)},
                                    {"min_kprime_minus_k", format_real(r.min_kprime_minus_k)},
                                    {"min_closed_form_kprime_minus_k", format_real(r.min_closed_form_kprime_minus_k)}};
        for (std::size_t i = 0; i < r.cac_fn_norms.size(); ++i)
          rows.push_back({"cac_fn_norm_" + std::to_string(i + 1), format_real(r.cac_fn_norms[i])});
        ctx.table(out_path, {"check", "value"}, rows);
        return r.g_within_2h && r.kernel_dominates ? kExitOk : kExitAudit;
      };
    });
  }

  // probe topology | compactness
  std::string case_name, builder = "halmos";
  std::optional<double> tol;
  std::vector<long> sizes = {10, 20, 40};
  double eps = 0.9;
  auto* probe = app.add_subcommand("probe", "convergence and compactness probes");
  probe->require_subcommand(1);
  {
    auto* topo = probe->add_subcommand("topology", "classify a shifted-operator sequence");
    topo->add_option("--case", case_name, "halmos-shift | parity-shift | box-modulation")
        ->required()
        ->check(CLI::IsMember({"halmos-shift", "parity-shift", "box-modulation"}));
    topo->add_option("--tol", tol, "Cauchy tolerance (default depends on the case)");
    topo->add_option("--out", out_path, "pairwise differences CSV");
    topo->callback([&] {
      action = [&] {
        const double t = tol.value_or(case_name == "parity-shift" ? 1e-3 : 0.1);
        const ProbeCase pc = probe_case_by_name(case_name);
        const TopologyProbeResult res = run_probe_case(pc, t);
        if (!out_path.empty()) {
          std::vector<CsvRow> rows;
          for (const auto& r : res.rows)
            rows.push_back({std::to_string(r.i), std::to_string(r.j), format_real(r.norm_diff),
                            format_real(r.strongstar_diff), format_real(r.weakstar_diff)});
          ctx.write(out_path, {"i", "j", "norm_diff", "strongstar_diff", "weakstar_diff"}, rows);
        }
        ctx.out << "case,classification,tail_norm_inf,tail_norm_sup,tail_strongstar_sup,tail_weakstar_sup\n"
                << pc.name << ',' << to_string(res.classification) << ',' << summary_real(res.tail_norm_inf) << ','
                << summary_real(res.tail_norm_sup) << ',' << summary_real(res.tail_strongstar_sup) << ','
                << summary_real(res.tail_weakstar_sup) << '\n';
        return kExitOk;
      };
    });
    auto* comp = probe->add_subcommand("compactness", "singular-value count trend over growing truncations");
    comp->add_option("--builder", builder, "halmos | harmonic-diagonal")
        ->check(CLI::IsMember({"halmos", "harmonic-diagonal"}));
    comp->add_option("--sizes", sizes, "truncation parameters")->delimiter(',');
    comp->add_option("--eps", eps, "singular value cut");
    comp->add_option("--out", out_path, "output CSV (default stdout)");
    comp->callback([&] {
      action = [&] {
        std::function<WindowedZOperator(long)> b;
        if (builder == "halmos")
          b = [](long k) { return halmos_operator(k); };
        else
          b = [](long k) { return harmonic_diagonal(k); };
        const auto p = compactness_proxy(b, sizes, eps);
        std::vector<CsvRow> rows;
        for (std::size_t i = 0; i < p.sizes.size(); ++i)
          rows.push_back({std::to_string(p.sizes[i]), std::to_string(p.counts[i])});
        ctx.table(out_path, {"size", "count"}, rows);
        ctx.out << "trend," << to_string(p.trend) << '\n';
        return kExitOk;
      };
    });
  }

  // stft decay
  std::string phi_path, k_arg = "all";
  auto* stft_cmd = app.add_subcommand("stft", "short-time Fourier transform");
  stft_cmd->require_subcommand(1);
  {
    auto* decay = stft_cmd->add_subcommand("decay", "profile of sup over K of |V_phi f(x, .)|");
    decay->add_option("--f", f_path, "signal CSV (t,re,im)")->required();
    decay->add_option("--phi", phi_path, "window CSV (t,re,im)")->required();
    decay->add_option("--k", k_arg, "all | grid:M");
    decay->add_option("--orders", orders, "finite group orders (default: windowed Z)")->delimiter(',');
    decay->add_option("--weight", weight, "Haar weight per point (finite groups)");
    decay->add_option("--out", out_path, "output CSV")->required();
    decay->callback([&] {
      action = [&] {
        DecayProfile prof({}, {});
        if (!orders.empty()) {
          const FiniteAbelianGroup g(orders, weight);
          std::vector<std::size_t> ks;
          if (k_arg == "all") {
            for (std::size_t i = 0; i < g.cardinality(); ++i) ks.push_back(i);
          } else {
            const auto grid = detail::k_grid(k_arg, g.cardinality());
            for (long q : grid)
              ks.push_back(static_cast<std::size_t>(q) * g.cardinality() / grid.size());
          }
          prof = uniform_decay_profile(read_group_function(f_path, g), read_group_function(phi_path, g), ks);
        } else {
          // On Z the dual is the circle; 'all' means the default 64-point grid.
          const long m = k_arg == "all" ? 64 : static_cast<long>(detail::k_grid(k_arg, 0).size());
          prof = uniform_decay_profile(read_zsequence(f_path), read_zsequence(phi_path), circle_grid(m));
        }
        ctx.write(out_path, {"x", "sup_abs"}, profile_rows(prof, true));
        return kExitOk;
      };
    });
  }

  // bound certify
  std::vector<double> tails;
  double c_bound = 0.0;
  auto* bound = app.add_subcommand("bound", "epsilon-net tail bound");
  bound->require_subcommand(1);
  {
    auto* certify = bound->add_subcommand("certify", "evaluate max_j t_j + eps * C");
    certify->add_option("--tails", tails, "generator tails t_1,t_2,...")->required()->delimiter(',');
    certify->add_option("--eps", eps, "net radius")->required();
    certify->add_option("--c", c_bound, "sup norm bound C")->required();
    certify->callback([&] {
      action = [&] {
        ctx.out << "bound," << summary_real(certified_tail_bound(NetCertificate{tails, eps, c_bound})) << '\n';
        return kExitOk;
      };
    });
  }

  // rk
  std::string family_dir, tail_out;
  long max_shift = 16;
  auto* rk = app.add_subcommand("rk", "Riesz-Kolmogorov moduli of a family on Z");
  rk->add_option("--family", family_dir, "directory of t,re,im CSV files")->required();
  rk->add_option("--out", out_path, "equicontinuity modulus CSV")->required();
  rk->add_option("--tail-out", tail_out, "tail-mass CSV (default: <out>.tailmass.csv)");
  rk->add_option("--max-shift", max_shift, "largest shift s")->check(CLI::NonNegativeNumber);
  rk->callback([&] {
    action = [&] {
      const RkModuli m = rk_moduli(detail::read_family_dir(family_dir), max_shift);
      ctx.write(out_path, {"param", "value"}, profile_rows(m.modulus, true));
      ctx.write(tail_out.empty() ? detail::sibling_path(out_path, "tailmass") : tail_out, {"param", "value"},
                profile_rows(m.tailmass, true));
      return kExitOk;
    };
  });

  // run <manifest>
  std::string manifest_path;
  auto* run = app.add_subcommand("run", "execute an experiment manifest (JSON)");
  run->add_option("manifest", manifest_path, "manifest path")->required();
  run->callback([&] { action = [&] { return run_manifest(manifest_path, ctx.out, ctx.err); }; });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    ctx.out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    ctx.out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    ctx.err << "usage error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return kExitUsage;
  }
  if (!action) {
    ctx.err << "usage error: no subcommand\n" << app.help();
    return kExitUsage;
  }
  try {
    return action();
  } catch (const precondition_error& e) {
    ctx.err << "precondition violated: " << e.what() << '\n';
  } catch (const structural_error& e) {
    ctx.err << "structure mismatch: " << e.what() << '\n';
  } catch (const io_error& e) {
    ctx.err << "i/o error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    ctx.err << "malformed input: " << e.what() << '\n';
  }
  return kExitUsage;
}

inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, err, std::nullopt, {}};
  return dispatch_in(args, ctx);
}

// ---------------------------------------------------------------------------
// Manifests:
//   {"subcommand": "conv audit", "params": {"n": 6, "samples": 200}, "seed": 7,
//    "outputs": {"out": "audit.csv"}}
// params and outputs become --key value flags; true booleans become bare flags.

inline std::string json_scalar_arg(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return format_real(v.get<double>());
  throw precondition_error("manifest parameter '" + key + "' must be a scalar, string or list");
}

inline std::vector<std::string> manifest_to_args(const nlohmann::json& m) {
  if (!m.is_object()) throw precondition_error("manifest must be a JSON object");
  for (const char* key : {"subcommand", "params", "seed"})
    if (!m.contains(key)) throw precondition_error(std::string("manifest is missing required key '") + key + "'");
  if (!m["subcommand"].is_string()) throw precondition_error("manifest 'subcommand' must be a string");
  if (!m["params"].is_object()) throw precondition_error("manifest 'params' must be an object");
  if (!m["seed"].is_number_unsigned() && !m["seed"].is_number_integer())
    throw precondition_error("manifest 'seed' must be an unsigned integer");
  if (m["seed"].is_number_integer() && m["seed"].get<long long>() < 0)
    throw precondition_error("manifest 'seed' must be an unsigned integer");

  const std::string sub = m["subcommand"].get<std::string>();
  std::vector<std::string> args;
  std::istringstream words(sub);
  for (std::string w; words >> w;) args.push_back(w);
  if (args.empty()) throw precondition_error("manifest 'subcommand' is empty");
  if (args.front() == "run") throw precondition_error("manifests cannot invoke 'run'");

  std::vector<std::string> positional;
  for (const auto& [key, v] : m["params"].items()) {
    if (key == "_positional") {
      if (!v.is_array()) throw precondition_error("'_positional' must be a list");
      for (const auto& p : v) positional.push_back(json_scalar_arg(p, key));
      continue;
    }
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back("--" + key);
      continue;
    }
    args.push_back("--" + key);
    if (v.is_array()) {
      std::string joined;
      for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + json_scalar_arg(v[i], key);
      args.push_back(joined);
    } else {
      args.push_back(json_scalar_arg(v, key));
    }
  }
  if (takes_seed(sub)) {
    args.push_back("--seed");
    args.push_back(json_scalar_arg(m["seed"], "seed"));
  }
  if (m.contains("outputs")) {
    if (!m["outputs"].is_object()) throw precondition_error("manifest 'outputs' must be an object");
    for (const auto& [key, v] : m["outputs"].items()) {
      if (!v.is_string()) throw precondition_error("manifest output '" + key + "' must be a path string");
      args.push_back("--" + key);
      args.push_back(v.get<std::string>());
    }
  }
  args.insert(args.end(), positional.begin(), positional.end());
  return args;
}

inline int run_manifest(const std::string& path, std::ostream& out, std::ostream& err) {
  nlohmann::json m;
  std::vector<std::string> args;
  try {
    std::ifstream f(path);
    if (!f) throw io_error("cannot read manifest '" + path + "'");
    m = nlohmann::json::parse(f);
    args = manifest_to_args(m);
  } catch (const nlohmann::json::exception& e) {
    err << "malformed manifest: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "malformed manifest: " << e.what() << '\n';
    return kExitUsage;
  }
  Context ctx{out, err, "manifest: " + m.dump(), {}};
  const int code = dispatch_in(args, ctx);
  for (const auto& p : ctx.written) {
    std::ofstream rec(p + ".manifest.json", std::ios::binary | std::ios::trunc);
    rec << m.dump(2) << '\n';
  }
  return code;
}

}  // namespace qha::cli
