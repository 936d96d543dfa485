#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "morphic/serialize.hpp"

using namespace morphic;

namespace {

struct Common {
  std::string substitution;
  std::string format;
  std::string output;
  std::size_t maxLen = 16;
  std::size_t depth = 0;
};

struct Outcome {
  Json json;
  std::string csv;
  /// Replaces the generic key: value rendering when set.
  std::string text;
  bool inconclusive = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t env_cap(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  return static_cast<std::size_t>(std::stoull(v));
}

void check_cap(const char* what, std::size_t value, std::size_t cap) {
  if (value > cap) {
    throw BudgetExceeded(std::string(what) + " = " + std::to_string(value) + " exceeds the cap " + std::to_string(cap));
  }
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

/// Top-level scalars as key,value rows; arrays and objects are dumped inline.
std::string flat_csv(const Json& j) {
  std::ostringstream out;
  out << "key,value\n";
  for (const auto& [k, v] : j.items()) {
    std::string s = scalar_text(v);
    if (s.find_first_of(",\"\n") != std::string::npos) {
      std::string q;
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      s = "\"" + q + "\"";
    }
    out << k << ',' << s << '\n';
  }
  return out.str();
}

std::string text(const Json& j) {
  std::ostringstream out;
  for (const auto& [k, v] : j.items()) out << k << ": " << scalar_text(v) << '\n';
  return out.str();
}

/// Expands --config FILE into flags placed right after the subcommand, so
/// flags given on the command line (parsed later, last one wins) override.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (path.empty()) return args;
  const Json cfg = Json::parse(read_file(path));
  if (!cfg.is_object()) throw Error("config must be a JSON object");
  std::vector<std::string> extra;
  for (const auto& [k, v] : cfg.items()) {
    if (v.is_boolean()) {
      if (v.get<bool>()) extra.push_back("--" + k);
      continue;
    }
    extra.push_back("--" + k);
    extra.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  }
  const auto at = args.empty() ? args.begin() : args.begin() + 1;
  args.insert(at, extra.begin(), extra.end());
  return args;
}

void merge(Json& into, const Json& from) {
  for (const auto& [k, v] : from.items()) into[k] = v;
}

Substitution load(const Common& c) { return parse_substitution_source(read_file(c.substitution)); }

LanguageIndex build_index(const Substitution& h, const Common& c, std::size_t minMaxLen = 0) {
  const std::size_t maxLen = std::max(c.maxLen, minMaxLen);
  check_cap("max-len", maxLen, env_cap("MORPHIC_MAX_LEN_CAP", 64));
  return LanguageIndex::build(h, {maxLen, c.depth});
}

Potential load_potential(const Alphabet& a, const std::string& path, double alpha, bool logForm) {
  if (!path.empty()) return parse_potential(a, Json::parse(read_file(path)));
  Potential v;
  v.alpha = alpha;
  v.logForm = logForm;
  return v;
}

std::optional<std::size_t> try_recognizability(const LanguageIndex& index, Json& notes) {
  try {
    return recognizability_length(index, std::min<std::size_t>(index.max_len(), 32)).length;
  } catch (const Inconclusive& e) {
    notes.push_back(std::string("l(H): ") + e.what());
    return std::nullopt;
  }
}

Outcome cmd_analyze(const Common& c) {
  const auto h = load(c);
  const auto report = analyze_structure(h);
  Outcome o;
  o.json["substitution"] = h.to_string();
  o.json["letters"] = h.size();
  const auto m = incidence_matrix(h);
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  o.json["incidence"] = rows;
  merge(o.json, to_json(h.alphabet(), report));
  Json notes = Json::array();
  o.json["powerFreeBound"] = nullptr;
  o.json["recognizabilityLength"] = nullptr;
  if (report.primitive && report.aperiodic.verdict != AperiodicityVerdict::certified_periodic) {
    // Powers of bases up to 12 need a deeper oracle than the default.
    Common deep = c;
    deep.depth = std::max<std::size_t>(c.depth, 64);
    const auto index = build_index(h, deep);
    for (std::size_t base = std::min<std::size_t>(12, index.max_len()); base > 0; --base) {
      try {
        const auto p = power_free_bound(index, base);
        o.json["powerFreeBound"] = p.bound;
        o.json["powerWitness"] = h.alphabet().render(p.witness);
        o.json["powerMaxBase"] = base;
        break;
      } catch (const Inconclusive& e) {
        if (base == 1) notes.push_back(std::string("N_H: ") + e.what());
      }
    }
    if (const auto lH = try_recognizability(index, notes)) {
      o.json["recognizabilityLength"] = *lH;
      o.json["recognizabilityBound"] =
          o.json["powerFreeBound"].is_null()
              ? Json()
              : Json(theoretical_recognizability_bound(h, o.json["powerFreeBound"].get<std::size_t>()));
    }
    if (report.marked) {
      try {
        o.json["misalignedBound"] = misaligned_coincidence_bound(index);
      } catch (const Inconclusive& e) {
        notes.push_back(std::string("misaligned bound: ") + e.what());
      }
    }
  } else if (!report.primitive) {
    notes.push_back("not primitive: language quantities skipped");
  } else {
    notes.push_back("periodic: language quantities skipped");
  }
  o.json["notes"] = notes;
  o.csv = flat_csv(o.json);
  return o;
}

Outcome cmd_language(const Common& c, std::size_t n) {
  const auto h = load(c);
  const auto index = build_index(h, c);
  if (n == 0 || n > index.max_len()) throw Error("--n must lie in [1, max-len]");
  Outcome o;
  Json complexity = Json::array();
  std::ostringstream csv;
  csv << "n,complexity\n";
  for (std::size_t k = 1; k <= index.max_len(); ++k) {
    complexity.push_back(index.complexity(k));
    csv << k << ',' << index.complexity(k) << '\n';
  }
  o.json["maxLen"] = index.max_len();
  o.json["certifiedDepth"] = index.certified_depth();
  o.json["twoFull"] = index.is_two_full();
  o.json["complexity"] = complexity;
  o.json["n"] = n;
  Json f = Json::array();
  for (const auto& w : index.factors(n)) f.push_back(h.alphabet().render(w));
  o.json["factors"] = f;
  o.csv = csv.str();
  return o;
}

Outcome cmd_bispecial(const Common& c, std::size_t upTo) {
  const auto h = load(c);
  const auto index = build_index(h, c);
  const std::size_t limit = upTo == 0 ? index.max_len() - 2 : upTo;
  const auto catalog = bispecials_up_to(index, limit);
  Outcome o;
  Json list = Json::array();
  std::ostringstream csv;
  csv << "word,length,m_l,m_r,m_b,i,kind,n,seedWord\n";
  Json notes = Json::array();
  const auto lH = try_recognizability(index, notes);
  std::optional<BispecialStructure> s;
  if (lH) s = bispecial_structure_check(index, catalog, *lH);
  for (const auto& r : catalog) {
    list.push_back(to_json(h.alphabet(), r));
    std::string n, seed;
    if (s) {
      for (const auto& f : s->factorizations) {
        if (f.word == r.word) {
          n = std::to_string(f.n);
          seed = h.alphabet().render(f.seed);
        }
      }
    }
    csv << h.alphabet().render(r.word) << ',' << r.word.size() << ',' << r.leftValence << ',' << r.rightValence << ','
        << r.bothValence << ',' << r.bilateralIndex << ',' << to_string(r.kind()) << ',' << n << ',' << seed << '\n';
  }
  o.json["upTo"] = limit;
  o.json["bispecials"] = list;
  if (s) {
    o.json["structure"] = to_json(h.alphabet(), *s);
    Json clusters = Json::array();
    for (const auto& cl : bispecial_length_clusters(*s, index.perron())) clusters.push_back(to_json(h.alphabet(), cl));
    o.json["clusters"] = clusters;
  }
  o.json["notes"] = notes;
  o.csv = csv.str();
  return o;
}

Outcome cmd_desub(const Common& c, const std::string& word) {
  const auto h = load(c);
  const auto z = h.alphabet().parse(word);
  const auto index = build_index(h, c, z.size() + 1);
  Outcome o;
  o.json = to_json(h.alphabet(), desubstitute(index, z));
  o.csv = flat_csv(o.json);
  return o;
}

Outcome cmd_accidents(const Common& c, const std::string& tailSpec, std::size_t horizon) {
  const auto h = load(c);
  const auto index = build_index(h, c);
  const auto x = parse_tail(h.alphabet(), tailSpec);
  const auto win = orbit_window(index, x, horizon + 1);
  const auto p = accidents_from_deltas(win.word, win.delta);
  Outcome o;
  o.json["tail"] = format_tail(h.alphabet(), x);
  o.json["horizon"] = horizon;
  merge(o.json, to_json(h.alphabet(), p));
  o.json["deltas"] = win.delta;
  o.csv = csv(p);
  // Staircase: one row per shift, a bar of length δ_k.
  std::ostringstream stairs;
  std::size_t next = 0;
  for (std::size_t k = 0; k < win.delta.size(); ++k) {
    const bool accident = next < p.times.size() && p.times[next] == k;
    if (accident) ++next;
    stairs << k << '\t' << win.delta[k] << '\t' << std::string(std::min<std::size_t>(win.delta[k], 100), '#')
           << (win.delta[k] > 100 ? "..." : "") << (accident ? "  <- accident" : "") << '\n';
  }
  o.text = stairs.str();
  return o;
}

struct RenormArgs {
  std::string tail;
  std::string potential;
  double alpha = 1.0;
  bool logForm = false;
  std::size_t mMin = 0;
  std::size_t mMax = 14;
  std::size_t lH = 0;
};

Outcome cmd_renorm(const Common& c, const RenormArgs& a) {
  const auto h = load(c);
  const auto index = build_index(h, c);
  const auto x = parse_tail(h.alphabet(), a.tail);
  const auto v = load_potential(h.alphabet(), a.potential, a.alpha, a.logForm);
  ClassifyOptions opts;
  opts.mMin = a.mMin;
  Json notes = Json::array();
  if (std::abs(v.alpha - 1.0) < 1e-12 && !v.logForm) {
    if (a.lH > 0) {
      opts.lH = a.lH;
    } else if (const auto lH = try_recognizability(index, notes)) {
      opts.lH = *lH;
    }
  }
  RenormResult r;
  try {
    r = classify_limit(v, index, x, a.mMax, opts);
  } catch (const Error& e) {
    // The closed form needs δ(x) >= 2; retry without it.
    if (opts.lH == 0 || dynamic_cast<const Saturation*>(&e) || dynamic_cast<const BudgetExceeded*>(&e)) throw;
    notes.push_back(std::string("closed form skipped: ") + e.what());
    opts.lH = 0;
    r = classify_limit(v, index, x, a.mMax, opts);
  }
  Outcome o;
  o.json["tail"] = format_tail(h.alphabet(), x);
  o.json["potential"] = to_json(h.alphabet(), v);
  merge(o.json, to_json(r));
  o.json["notes"] = notes;
  o.csv = csv(r);
  return o;
}

struct FreezeArgs {
  std::string wJ;
  std::size_t N = 8;
  std::optional<double> beta;
  std::size_t nMax = 20;
  std::size_t LMax = 24;
  std::string tail;
  std::string potential;
};

Outcome cmd_freeze(const Common& c, const FreezeArgs& a) {
  const std::size_t cap = env_cap("MORPHIC_ENUM_CAP", 28);
  check_cap("nmax", a.nMax, cap);
  check_cap("lmax", a.LMax, cap);
  const auto h = load(c);
  const Word wJ = h.alphabet().parse(a.wJ);
  const auto index = build_index(h, c, std::max(a.LMax, a.nMax + wJ.size()) + 1);
  const CylinderJ J{wJ, a.N};
  const Tail x = a.tail.empty() ? Tail::periodic(wJ, Word(1, '\0')) : parse_tail(h.alphabet(), a.tail);
  Outcome o;
  o.json["wJ"] = a.wJ;
  o.json["N"] = a.N;
  o.json["tail"] = format_tail(h.alphabet(), x);
  if (a.beta) {
    const auto cert = freezing_certificate(index, J, *a.beta, a.nMax, a.LMax, x);
    merge(o.json, to_json(cert));
    o.inconclusive = cert.status == CertificateStatus::geometric_divergent ||
                     cert.status == CertificateStatus::c_ef_too_large;
    FreezingScan one;
    one.certificates.push_back(cert);
    o.csv = csv(one);
  } else {
    const auto scan = freezing_scan(index, J, default_beta_grid(), a.nMax, a.LMax, x);
    merge(o.json, to_json(scan));
    if (!a.potential.empty() && scan.firstCertified) {
      const auto v = load_potential(h.alphabet(), a.potential, 1.0, false);
      o.json["xi1"] = to_json(xi1_comparison_transfer(index, v, *scan.firstCertified));
    }
    o.csv = csv(scan);
  }
  return o;
}

struct PressureArgs {
  std::size_t n = 14;
  std::vector<double> betas;
  std::string potential;
  double alpha = 1.0;
  bool logForm = true;
};

Outcome cmd_pressure(const Common& c, const PressureArgs& a) {
  check_cap("n", a.n, env_cap("MORPHIC_ENUM_CAP", 28));
  const auto h = load(c);
  const auto index = build_index(h, c, a.n + 1);
  const auto v = load_potential(h.alphabet(), a.potential, a.alpha, a.logForm);
  const auto curve = pressure_curve(index, v, a.betas.empty() ? default_beta_grid() : a.betas, a.n);
  Outcome o;
  o.json = to_json(curve);
  o.csv = csv(curve);
  return o;
}

void emit(const Common& c, const Outcome& o) {
  std::string body;
  if (c.format == "json") {
    body = o.json.dump(2) + "\n";
  } else if (c.format == "csv") {
    body = o.csv;
  } else {
    body = o.text.empty() ? text(o.json) : o.text;
  }
  if (c.output.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(c.output);
    if (!out) throw Error("cannot write " + c.output);
    out << body;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Substitution subshifts: language, recognizability, renormalization and freezing"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string configPath;
  app.add_option("--config", configPath, "JSON file whose keys mirror the command flags");

  Common common;
  auto addCommon = [&](CLI::App* sub, const char* defaultFormat) {
    common.format = defaultFormat;
    sub->add_option("--substitution", common.substitution, "Substitution file, one 'a -> image' rule per line")
        ->required();
    sub->add_option("--format", common.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--output", common.output, "Write here instead of stdout");
    sub->add_option("--max-len", common.maxLen, "Factor sets are enumerated up to this length");
    sub->add_option("--depth", common.depth, "Minimum certified depth of the substring oracle");
  };

  auto* analyze = app.add_subcommand("analyze", "Primitivity, marking, 2-fullness, aperiodicity, λ, N_H, l(H)");
  addCommon(analyze, "json");

  std::size_t langN = 4;
  auto* language = app.add_subcommand("language", "Complexity and factors");
  addCommon(language, "json");
  language->add_option("--n", langN, "Length of the listed factors");

  std::size_t upTo = 0;
  auto* bispecial = app.add_subcommand("bispecial", "Bispecial words and their structure");
  addCommon(bispecial, "json");
  bispecial->add_option("--up-to", upTo, "Longest bispecial listed (default max-len - 2)");

  std::string word;
  auto* desub = app.add_subcommand("desub", "Decompositions z = head · H(core) · tail");
  addCommon(desub, "json");
  desub->add_option("--word", word, "Word to desubstitute")->required();

  std::string accTail;
  std::size_t horizon = 64;
  auto* acc = app.add_subcommand("accidents", "Accident times, depths and witnesses along a tail");
  addCommon(acc, "json");
  acc->add_option("--tail", accTail, "PREFIX(BLOCK) or PREFIX[a]")->required();
  acc->add_option("--horizon", horizon, "Last position examined");

  RenormArgs ra;
  auto* renorm = app.add_subcommand("renorm", "Iterates of the renormalization operator");
  addCommon(renorm, "json");
  renorm->add_option("--tail", ra.tail, "PREFIX(BLOCK) or PREFIX[a]")->required();
  renorm->add_option("--potential", ra.potential, "Potential JSON file");
  renorm->add_option("--alpha", ra.alpha, "Exponent of the default potential 1/δ^α");
  renorm->add_flag("--log", ra.logForm, "Use log(1 + 1/δ) instead of 1/δ^α");
  renorm->add_option("--mmin", ra.mMin, "First iterate");
  renorm->add_option("--mmax", ra.mMax, "Last iterate");
  renorm->add_option("--lh", ra.lH, "l(H) for the closed form (default: measured)");

  FreezeArgs fa;
  double beta = 0;
  auto* freeze = app.add_subcommand("freeze", "Freezing certificate on the cylinder [wJ]");
  addCommon(freeze, "json");
  freeze->add_option("--wJ", fa.wJ, "Word outside the language")->required();
  freeze->add_option("--N", fa.N, "Free threshold");
  auto* betaOpt = freeze->add_option("--beta", beta, "Single β (default: scan the β grid)");
  freeze->add_option("--nmax", fa.nMax, "Longest return word");
  freeze->add_option("--lmax", fa.LMax, "Longest excursion-free word");
  freeze->add_option("--tail", fa.tail, "Point x of [wJ] (default wJ followed by the first letter forever)");
  freeze->add_option("--potential", fa.potential, "Potential of the comparison class for the transferred threshold");

  PressureArgs pa;
  auto* pressure = app.add_subcommand("pressure", "Finite-n pressure bounds on a β grid");
  addCommon(pressure, "csv");
  pressure->add_option("--n", pa.n, "Word length");
  pressure->add_option("--beta", pa.betas, "β values (default: geometric grid on [0.1, 200])")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->delimiter(',');
  pressure->add_option("--potential", pa.potential, "Potential JSON file (default log(1 + 1/δ))");

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    // Default formats differ per command; reset before parsing.
    const std::string first = args.empty() ? "" : args.back();
    common.format = first == "pressure" ? "csv" : "json";
    app.parse(args);
    if (betaOpt->count() > 0) fa.beta = beta;

    Outcome o;
    if (*analyze) o = cmd_analyze(common);
    if (*language) o = cmd_language(common, langN);
    if (*bispecial) o = cmd_bispecial(common, upTo);
    if (*desub) o = cmd_desub(common, word);
    if (*acc) o = cmd_accidents(common, accTail, horizon);
    if (*renorm) o = cmd_renorm(common, ra);
    if (*freeze) o = cmd_freeze(common, fa);
    if (*pressure) o = cmd_pressure(common, pa);
    emit(common, o);
    return o.inconclusive ? 2 : 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const Saturation& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const Inconclusive& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
