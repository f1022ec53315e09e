#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kwise/kwise.hpp"

namespace kwise::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Largest xor draw rendered as a sign string by `sample`.
inline constexpr unsigned kMaxRenderedXorOrder = 16;

/// Bad flag combinations found after parsing; reported like parse errors (exit 2).
class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  if (out.empty()) throw ParseError("empty list '" + text + "'");
  return out;
}

inline unsigned parse_unsigned(const std::string& text) {
  const BigInt v = detail::parse_integer(text);
  if (sgn(v) < 0 || !v.fits_uint_p()) throw ParseError("expected a nonnegative integer, got '" + text + "'");
  return static_cast<unsigned>(v.get_ui());
}

inline Weights parse_weights(const std::string& text) {
  std::vector<Rational> a;
  for (const std::string& item : split_list(text)) a.push_back(parse_rational(item));
  return Weights(std::move(a));
}

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void emit(std::ostream& out, const std::string& format, const Json& json, const Table& table) {
  if (format == "json") {
    out << json.dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
      out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
    return;
  }
  std::vector<std::size_t> width(table.header.size());
  for (std::size_t i = 0; i < width.size(); ++i) width[i] = table.header[i].size();
  for (const auto& row : table.rows)
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << cells[i];
      if (i + 1 < cells.size()) out << std::string(width[i] - cells[i].size() + 2, ' ');
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

inline std::string short_decimal(const BigFloat& v, mpfr_rnd_t rnd) { return v.to_decimal(rnd, 12); }

struct Options {
  std::string format = "json";
  std::string n;
  std::string p;
  std::string k;
  std::string a;
  std::string kind;
  std::string construct;
  std::string space_file;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  mpfr_prec_t precision_bits = kDefaultPrecision;
  bool full = false;
  bool reduced = false;
  bool marginal = false;
};

inline SampleSpace load_space(const Options& o) {
  if (!o.space_file.empty()) {
    std::ifstream in(o.space_file);
    if (!in) throw InvalidArgument("cannot open '" + o.space_file + "'");
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON in '") + o.space_file + "': " + e.what());
    }
    return sample_space_from_json(j);
  }
  if (o.construct.empty()) throw UsageError("either --construct or --space is required");
  if (o.n.empty()) throw UsageError("--n is required with --construct");
  const unsigned n = parse_unsigned(o.n);
  if (o.construct == "partition") return partition_space(n);
  if (o.construct == "xor") return xor_space(n);
  if (o.construct == "independent") return independent_space(n);
  throw UsageError("unknown construction '" + o.construct + "'");
}

inline Weights weights_for(const Options& o, std::size_t n) {
  if (o.a.empty()) return Weights::ones(static_cast<unsigned>(n));
  Weights a = parse_weights(o.a);
  if (a.size() != n) throw DimensionMismatch("--a has " + std::to_string(a.size()) + " entries, expected " + std::to_string(n));
  return a;
}

inline Rational require_p(const Options& o) {
  if (o.p.empty()) throw UsageError("--p is required");
  return parse_rational(o.p);
}

inline unsigned require_unsigned(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  return parse_unsigned(text);
}

inline PrecisionOptions precision(const Options& o) {
  PrecisionOptions opts;
  opts.initial_precision = o.precision_bits;
  opts.max_precision = std::max(opts.max_precision, o.precision_bits);
  return opts;
}

inline void cmd_construct(const Options& o, std::ostream& out) {
  const SampleSpace space = load_space(o);
  Table t{{"signs", "prob"}, {}};
  for (const Atom& atom : space.atoms()) t.rows.push_back({space.point(atom).to_string(), to_string(atom.prob)});
  emit(out, o.format, to_json(space), t);
}

inline void cmd_verify(const Options& o, std::ostream& out) {
  const SampleSpace space = load_space(o);
  const unsigned k = require_unsigned(o.k, "--k");
  const IndependenceReport report = o.marginal ? check_kwise_marginal(space, k) : check_kwise(space, k);
  Json j = to_json(report);
  j["exchangeable"] = check_exchangeable(space);
  std::string witness_t, witness_c;
  if (report.witness) {
    for (unsigned c : report.witness->coords) witness_t += (witness_t.empty() ? "" : " ") + std::to_string(c);
    witness_c = to_string(report.witness->coefficient);
  }
  Table t{{"k_requested", "k_verified", "witness_T", "witness_coefficient", "exchangeable"},
          {{std::to_string(k), std::to_string(report.k_verified), witness_t, witness_c,
            j["exchangeable"].get<bool>() ? "true" : "false"}}};
  emit(out, o.format, j, t);
}

inline void cmd_moment(const Options& o, std::ostream& out) {
  const SampleSpace space = load_space(o);
  const Weights a = weights_for(o, space.dimension());
  const MomentResult r = pth_moment(space, a, require_p(o), precision(o));
  const std::string value = r.exact() ? to_string(std::get<Rational>(r.value))
                                      : "[" + short_decimal(std::get<Interval>(r.value).lo(), MPFR_RNDD) + ", " +
                                            short_decimal(std::get<Interval>(r.value).hi(), MPFR_RNDU) + "]";
  Table t{{"p", "value", "ratio_lo", "ratio_hi"},
          {{to_string(r.p), value, short_decimal(r.ratio.lo(), MPFR_RNDD), short_decimal(r.ratio.hi(), MPFR_RNDU)}}};
  emit(out, o.format, to_json(r), t);
}

inline void cmd_bound(const Options& o, std::ostream& out) {
  const Rational p = require_p(o);
  std::optional<Interval> value;
  if (o.kind == "haagerup") {
    value = haagerup_constant(p, o.precision_bits);
  } else if (o.kind == "interpolation") {
    value = interpolation_bound(require_unsigned(o.n, "--n"), p, require_unsigned(o.k, "--k"), o.precision_bits);
  } else if (o.kind == "sharp") {
    value = sharp_pairwise_value(require_unsigned(o.n, "--n"), p, o.precision_bits);
  } else {
    throw UsageError("--kind must be haagerup, interpolation or sharp");
  }
  Json j{{"kind", o.kind}, {"value", to_json(*value)}};
  Table t{{"kind", "lo", "hi"}, {{o.kind, short_decimal(value->lo(), MPFR_RNDD), short_decimal(value->hi(), MPFR_RNDU)}}};
  emit(out, o.format, j, t);
}

inline void cmd_constant(const Options& o, std::ostream& out) {
  if (o.full && o.reduced) throw UsageError("--full and --reduced are exclusive");
  const unsigned n = require_unsigned(o.n, "--n");
  const unsigned k = require_unsigned(o.k, "--k");
  const Rational p = require_p(o);
  if (!o.full && !o.a.empty()) throw UsageError("--a applies to --full only; the reduced program fixes a = all-ones");
  const LpSolution s = o.full ? solve_full(n, p, k, weights_for(o, n), precision(o)) : solve_reduced(n, p, k, precision(o));
  const std::string value =
      std::holds_alternative<Rational>(s.optimal_value)
          ? to_string(std::get<Rational>(s.optimal_value))
          : "[" + short_decimal(std::get<Interval>(s.optimal_value).lo(), MPFR_RNDD) + ", " +
                short_decimal(std::get<Interval>(s.optimal_value).hi(), MPFR_RNDU) + "]";
  Table t{{"n", "p", "k", "value", "ratio_lo", "ratio_hi", "unique", "certificate_ok"},
          {{std::to_string(n), to_string(p), std::to_string(k), value, short_decimal(s.ratio.lo(), MPFR_RNDD),
            short_decimal(s.ratio.hi(), MPFR_RNDU), s.unique ? (*s.unique ? "true" : "false") : "null",
            s.certificate_ok ? "true" : "false"}}};
  emit(out, o.format, to_json(s), t);
}

inline StreamSpec stream_spec(const Options& o) {
  if (o.kind != "partition" && o.kind != "xor" && o.kind != "independent")
    throw UsageError("--kind must be partition, xor or independent");
  return {parse_stream_kind(o.kind), require_unsigned(o.n, "--n"), o.seed};
}

inline void cmd_sample(const Options& o, std::ostream& out) {
  const StreamSpec spec = stream_spec(o);
  const std::uint64_t count = o.samples == 0 ? 1 : o.samples;
  Sampler sampler(spec);
  if (spec.kind == StreamKind::xor_family && spec.n > kMaxRenderedXorOrder)
    throw DimensionTooLarge("sign strings are rendered for xor orders n <= 16 only");
  Json draws = Json::array();
  Table t{{"signs"}, {}};
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string signs;
    if (spec.kind == StreamKind::xor_family) {
      const XorDraw d = sampler.next_xor();
      signs.resize(d.size());
      for (std::uint64_t j = 0; j < d.size(); ++j) signs[j] = d[j] > 0 ? '+' : '-';
    } else {
      signs = sampler.next().to_string();
    }
    draws.push_back(signs);
    t.rows.push_back({std::move(signs)});
  }
  Json j{{"kind", std::string(to_string(spec.kind))}, {"n", spec.n}, {"seed", spec.seed}, {"draws", std::move(draws)}};
  emit(out, o.format, j, t);
}

inline void cmd_estimate(const Options& o, std::ostream& out) {
  const StreamSpec spec = stream_spec(o);
  const Rational p = require_p(o);
  const std::uint64_t samples = o.samples == 0 ? 100000 : o.samples;
  const Sampler probe(spec);
  const McEstimate e = estimate_moment(spec, weights_for(o, probe.dimension()), p, samples);
  Json j = to_json(e);
  j["kind"] = std::string(to_string(spec.kind));
  j["n"] = spec.n;
  j["p"] = to_string(p);
  j["seed"] = spec.seed;
  Table t{{"kind", "n", "p", "mean", "std_error", "samples"},
          {{std::string(to_string(spec.kind)), std::to_string(spec.n), to_string(p), j["mean"].get<std::string>(),
            j["std_error"].get<std::string>(), std::to_string(e.samples)}}};
  emit(out, o.format, j, t);
}

/// Ratio of the product law at a = all-ones; the k-wise optimum can never fall below it.
inline Interval independent_ratio(unsigned n, const Rational& p, const PrecisionOptions& opts) {
  if (is_even_integer(p)) {
    const Rational m = even_moment_independent(Weights::ones(n), static_cast<unsigned>(p.get_num().get_ui()));
    return detail::ratio_from_moment(m, p, Rational(n), opts.initial_precision);
  }
  return khintchine_ratio(independent_space(n), Weights::ones(n), p, opts);
}

inline void cmd_table(const Options& o, std::ostream& out) {
  const std::vector<std::string> ns = split_list(o.n.empty() ? "2,4,6,8,10" : o.n);
  const std::vector<std::string> ps = split_list(o.p.empty() ? "4,6" : o.p);
  const std::vector<std::string> ks = split_list(o.k.empty() ? "2,3,4" : o.k);
  const PrecisionOptions opts = precision(o);
  Json rows = Json::array();
  Table t{{"N", "p", "k", "lp_value", "lp_ratio_hi", "sharp", "interpolation_hi", "haagerup_hi", "independent_lo",
           "le_interpolation", "ge_independent"},
          {}};
  auto cell = [](const std::optional<Interval>& v, bool upper) {
    return v ? short_decimal(upper ? v->hi() : v->lo(), upper ? MPFR_RNDU : MPFR_RNDD) : std::string("-");
  };
  auto flag = [](const std::optional<bool>& b) { return b ? (*b ? "true" : "false") : "-"; };
  for (const std::string& n_text : ns) {
    const unsigned n = parse_unsigned(n_text);
    for (const std::string& p_text : ps) {
      const Rational p = parse_rational(p_text);
      for (const std::string& k_text : ks) {
        const unsigned k = parse_unsigned(k_text);
        if (k > n) continue;
        const LpSolution s = solve_reduced(n, p, k, opts);
        std::optional<Interval> sharp, interp;
        if (n % 2 == 0 && (k == 2 || k == 3) && p >= 2) sharp = sharp_pairwise_value(n, p, opts.initial_precision);
        if (k % 2 == 0 && p >= k) interp = interpolation_bound(n, p, k, opts.initial_precision);
        const Interval haagerup = haagerup_constant(p, opts.initial_precision);
        const Interval independent = independent_ratio(n, p, opts);
        std::optional<bool> le_interp;
        if (interp) le_interp = s.ratio.hi() <= interp->hi();
        const bool ge_independent = s.ratio.hi() >= independent.lo();

        Json row{{"N", n},
                 {"p", to_string(p)},
                 {"k", k},
                 {"lp_value", to_json(s.optimal_value)},
                 {"lp_ratio", to_json(s.ratio)},
                 {"sharp", sharp ? to_json(*sharp) : Json(nullptr)},
                 {"interpolation", interp ? to_json(*interp) : Json(nullptr)},
                 {"haagerup", to_json(haagerup)},
                 {"independent_ratio", to_json(independent)},
                 {"le_interpolation", le_interp ? Json(*le_interp) : Json(nullptr)},
                 {"ge_independent", ge_independent},
                 {"certificate_ok", s.certificate_ok}};
        if (s.note) row["note"] = *s.note;
        rows.push_back(std::move(row));
        const std::string value = std::holds_alternative<Rational>(s.optimal_value)
                                      ? to_string(std::get<Rational>(s.optimal_value))
                                      : short_decimal(std::get<Interval>(s.optimal_value).hi(), MPFR_RNDU);
        t.rows.push_back({std::to_string(n), to_string(p), std::to_string(k), value, cell(s.ratio, true),
                          cell(sharp, true), cell(interp, true), cell(haagerup, true), cell(independent, false),
                          flag(le_interp), ge_independent ? "true" : "false"});
      }
    }
  }
  emit(out, o.format, Json{{"rows", std::move(rows)}}, t);
}

/// Parses args (without the program name) and runs one subcommand. Exit codes: 0 success,
/// 1 computation error, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tools for k-wise independent Rademacher sums", "kwise"};
  app.require_subcommand(1);
  Options o;

  auto format_opt = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));
    sub->add_option("--precision-bits", o.precision_bits, "working precision for interval results")
        ->check(CLI::Range(16, 1 << 20));
  };
  auto space_opts = [&](CLI::App* sub) {
    sub->add_option("--construct", o.construct, "partition, xor or independent");
    sub->add_option("--n", o.n, "dimension N (xor: the order n, N = 2^n)");
    sub->add_option("--space", o.space_file, "read a sample space JSON file instead");
  };

  CLI::App* construct = app.add_subcommand("construct", "emit the law of a construction");
  space_opts(construct);
  format_opt(construct);

  CLI::App* verify = app.add_subcommand("verify", "check k-wise independence of a law");
  space_opts(verify);
  verify->add_option("--k", o.k, "independence order")->required();
  verify->add_flag("--marginal", o.marginal, "use the marginal-uniformity check");
  format_opt(verify);

  CLI::App* moment = app.add_subcommand("moment", "E|<a,x>|^p of a law");
  space_opts(moment);
  moment->add_option("--p", o.p, "exponent (rational or decimal)")->required();
  moment->add_option("--a", o.a, "comma-separated rational weights (default all ones)");
  format_opt(moment);

  CLI::App* bound = app.add_subcommand("bound", "classical, interpolation and sharp bounds");
  bound->add_option("--kind", o.kind, "haagerup, interpolation or sharp")->required();
  bound->add_option("--p", o.p, "exponent")->required();
  bound->add_option("--n", o.n, "dimension N");
  bound->add_option("--k", o.k, "independence order");
  format_opt(bound);

  CLI::App* constant = app.add_subcommand("constant", "solve the extremal linear program");
  constant->add_option("--n", o.n, "dimension N")->required();
  constant->add_option("--p", o.p, "exponent")->required();
  constant->add_option("--k", o.k, "independence order")->required();
  constant->add_option("--a", o.a, "comma-separated rational weights (--full only)");
  constant->add_flag("--full", o.full, "all 2^N atoms");
  constant->add_flag("--reduced", o.reduced, "exchangeable reduction, N+1 variables (default)");
  format_opt(constant);

  CLI::App* sample = app.add_subcommand("sample", "draw sign vectors from a stream");
  sample->add_option("--kind", o.kind, "partition, xor or independent")->required();
  sample->add_option("--n", o.n, "dimension N (xor: the order n)")->required();
  sample->add_option("--seed", o.seed, "64-bit seed");
  sample->add_option("--samples", o.samples, "number of draws (default 1)");
  format_opt(sample);

  CLI::App* estimate = app.add_subcommand("estimate", "Monte Carlo estimate of E|<a,x>|^p");
  estimate->add_option("--kind", o.kind, "partition, xor or independent")->required();
  estimate->add_option("--n", o.n, "dimension N (xor: the order n)")->required();
  estimate->add_option("--p", o.p, "exponent")->required();
  estimate->add_option("--a", o.a, "comma-separated rational weights (default all ones)");
  estimate->add_option("--seed", o.seed, "64-bit seed");
  estimate->add_option("--samples", o.samples, "number of draws (default 100000)");
  format_opt(estimate);

  CLI::App* table = app.add_subcommand("table", "sweep (N, p, k) and compare the LP with the bounds");
  table->add_option("--n", o.n, "comma-separated N values (default 2,4,6,8,10)");
  table->add_option("--p", o.p, "comma-separated exponents (default 4,6)");
  table->add_option("--k", o.k, "comma-separated orders (default 2,3,4)");
  format_opt(table);

  std::vector<std::string> argv_store{"kwise"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (construct->parsed()) cmd_construct(o, out);
    else if (verify->parsed()) cmd_verify(o, out);
    else if (moment->parsed()) cmd_moment(o, out);
    else if (bound->parsed()) cmd_bound(o, out);
    else if (constant->parsed()) cmd_constant(o, out);
    else if (sample->parsed()) cmd_sample(o, out);
    else if (estimate->parsed()) cmd_estimate(o, out);
    else if (table->parsed()) cmd_table(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitOk;
}

}  // namespace kwise::cli
