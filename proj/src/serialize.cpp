#include "morphic/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace morphic {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Json number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return std::stod(format_number(v));
}

Substitution parse_substitution_source(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos || text[first] != '{') return parse_substitution(text);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(std::string("substitution JSON: ") + e.what());
  }
  std::vector<std::pair<std::string, std::string>> rules;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw Error("substitution JSON: image of '" + k + "' must be a string");
    rules.emplace_back(k, v.get<std::string>());
  }
  return make_substitution(rules);
}

Tail parse_tail(const Alphabet& alphabet, std::string_view text) {
  const auto open = text.find_first_of("([");
  if (open == std::string_view::npos || text.back() != (text[open] == '(' ? ')' : ']')) {
    throw Error("tail '" + std::string(text) + "' must look like PREFIX(BLOCK) or PREFIX[a]");
  }
  const Word prefix = alphabet.parse(text.substr(0, open));
  const Word inner = alphabet.parse(text.substr(open + 1, text.size() - open - 2));
  if (text[open] == '(') {
    if (inner.empty()) throw Error("tail block must be nonempty");
    return Tail::periodic(prefix, inner);
  }
  if (inner.size() != 1) throw Error("fixed-point tail needs exactly one letter");
  return Tail::fixed_point(prefix, static_cast<Letter>(inner[0]));
}

std::string format_tail(const Alphabet& alphabet, const Tail& t) {
  if (t.kind() == Tail::Kind::periodic) return alphabet.render(t.prefix()) + "(" + alphabet.render(t.block()) + ")";
  return alphabet.render(t.prefix()) + "[" + alphabet.symbol(t.letter()) + "]";
}

namespace {

CylinderFunction parse_cylinder(const Alphabet& alphabet, const Json& j, double fallback) {
  if (j.is_null()) return CylinderFunction::constant(fallback);
  if (j.is_number()) return CylinderFunction::constant(j.get<double>());
  if (!j.is_object()) throw Error("cylinder function must be a number or an object");
  if (j.contains("constant")) {
    if (j.contains("table")) throw Error("cylinder function has both a table and a constant");
    return CylinderFunction::constant(j.at("constant").get<double>());
  }
  const auto depth = j.value("depth", std::size_t{0});
  std::unordered_map<Word, double> table;
  if (j.contains("table")) {
    for (const auto& [k, v] : j.at("table").items()) table.emplace(alphabet.parse(k), v.get<double>());
  }
  return CylinderFunction(depth, std::move(table), j.value("fallback", 0.0));
}

Json words(const Alphabet& alphabet, const std::vector<Word>& ws) {
  Json a = Json::array();
  for (const auto& w : ws) a.push_back(alphabet.render(w));
  return a;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return number(*v);
  } else {
    return *v;
  }
}

}  // namespace

Potential parse_potential(const Alphabet& alphabet, const Json& j) {
  Potential v;
  if (!j.is_object()) throw Error("potential must be a JSON object");
  v.alpha = j.value("alpha", 1.0);
  v.logForm = j.value("logForm", j.value("log", false));
  v.g = parse_cylinder(alphabet, j.contains("g") ? j.at("g") : Json(), 1.0);
  v.h = parse_cylinder(alphabet, j.contains("h") ? j.at("h") : Json(), 0.0);
  return v;
}

Json to_json(const Alphabet& alphabet, const CylinderFunction& f) {
  if (f.depth() == 0 || f.table().empty()) return number(f.fallback());
  Json j;
  j["depth"] = f.depth();
  std::vector<std::pair<std::string, double>> rows;
  for (const auto& [w, v] : f.table()) rows.emplace_back(alphabet.render(w), v);
  std::sort(rows.begin(), rows.end());
  Json table = Json::object();
  for (const auto& [k, v] : rows) table[k] = number(v);
  j["table"] = table;
  j["fallback"] = number(f.fallback());
  return j;
}

Json to_json(const Alphabet& alphabet, const Potential& v) {
  Json j;
  j["alpha"] = number(v.alpha);
  j["logForm"] = v.logForm;
  j["g"] = to_json(alphabet, v.g);
  j["h"] = to_json(alphabet, v.h);
  return j;
}

Json to_json(const Alphabet& alphabet, const StructureReport& r) {
  Json j;
  j["primitive"] = r.primitive;
  j["primitiveWitness"] = optional_json(r.primitiveWitness);
  j["marked"] = r.marked;
  j["twoFull"] = r.twoFull;
  Json a;
  a["verdict"] = r.aperiodic.verdict == AperiodicityVerdict::certified_periodic ? "periodic" : "no-periodicity-found";
  a["bound"] = r.aperiodic.bound;
  a["stallLength"] = optional_json(r.aperiodic.stallLength);
  a["periodWord"] = alphabet.render(r.aperiodic.periodWord);
  j["aperiodicEvidence"] = a;
  if (r.perron) {
    j["perron"] = number(r.perron->lambda);
    j["perronRelativeError"] = number(r.perron->relativeError);
    j["lengthConstant"] = number(r.perron->lengthConstant);
    j["lengthVector"] = numbers(r.perron->lengths);
  } else {
    j["perron"] = nullptr;
    j["lengthConstant"] = nullptr;
  }
  return j;
}

Json to_json(const Alphabet& alphabet, const SpecialWordRecord& r) {
  Json j;
  j["word"] = alphabet.render(r.word);
  j["length"] = r.word.size();
  j["leftValence"] = r.leftValence;
  j["rightValence"] = r.rightValence;
  j["bothValence"] = r.bothValence;
  j["bilateralIndex"] = r.bilateralIndex;
  j["kind"] = r.bispecial() ? to_string(r.kind()) : nullptr;
  return j;
}

Json to_json(const Alphabet& alphabet, const DesubReport& r) {
  Json j;
  j["word"] = alphabet.render(r.word);
  j["verdict"] = to_string(r.verdict);
  Json list = Json::array();
  for (const auto& d : r.decompositions) {
    Json e;
    e["S"] = alphabet.render(d.head);
    e["core"] = alphabet.render(d.core);
    e["P"] = alphabet.render(d.tail);
    e["sHat"] = d.headLetter ? Json(alphabet.symbol(*d.headLetter)) : Json();
    e["pHat"] = d.tailLetter ? Json(alphabet.symbol(*d.tailLetter)) : Json();
    list.push_back(e);
  }
  j["decompositions"] = list;
  return j;
}

Json to_json(const Alphabet& alphabet, const AccidentProfile& p) {
  Json j;
  j["delta0"] = p.delta0;
  j["times"] = p.times;
  j["gaps"] = p.gaps;
  j["depths"] = p.depths;
  j["Deltas"] = p.Deltas;
  j["witnesses"] = words(alphabet, p.witnesses);
  Json overlaps = Json::array();
  for (bool b : p.overlapsPrevious) overlaps.push_back(b);
  j["overlapsPrevious"] = overlaps;
  return j;
}

Json to_json(const Alphabet& alphabet, const BispecialStructure& s) {
  Json j;
  j["lH"] = s.lH;
  Json f = Json::array();
  for (const auto& x : s.factorizations) {
    f.push_back({{"word", alphabet.render(x.word)}, {"n", x.n}, {"seed", alphabet.render(x.seed)}});
  }
  j["factorizations"] = f;
  Json v = Json::array();
  for (const auto& x : s.violations) v.push_back({{"word", alphabet.render(x.word)}, {"reason", x.reason}});
  j["violations"] = v;
  return j;
}

Json to_json(const Alphabet& alphabet, const LengthCluster& c) {
  Json j;
  j["seed"] = alphabet.render(c.seed);
  j["exponents"] = c.exponents;
  j["lengths"] = c.lengths;
  j["c"] = number(c.c);
  j["spread"] = number(c.spread);
  j["theta"] = optional_json(c.theta);
  return j;
}

Json to_json(const RenormResult& r) {
  Json j;
  j["mMin"] = r.mMin;
  j["values"] = numbers(r.values);
  j["classification"] = to_string(r.classification);
  j["limitEstimate"] = optional_json(r.limitEstimate);
  j["closedForm"] = optional_json(r.closedForm);
  j["growthRatios"] = numbers(r.growthRatios);
  return j;
}

Json to_json(const LimitU& u) {
  Json j;
  j["k"] = u.k;
  j["times"] = u.times;
  j["depths"] = u.depths;
  j["value"] = number(u.value);
  j["plainLengthValue"] = number(u.plainLengthValue);
  return j;
}

Json to_json(const FreezingCertificate& c) {
  Json j;
  j["beta"] = number(c.beta);
  j["nMax"] = c.nMax;
  j["LMax"] = c.LMax;
  j["AN"] = number(c.AN);
  j["cEFTruncated"] = number(c.cEFTruncated);
  j["cEFTailAllowance"] = number(c.cEFTailAllowance);
  j["cEF"] = number(c.cEF);
  j["cEFByM"] = numbers(c.cEFByM);
  j["operatorValue"] = number(c.operatorValue);
  j["freeFactor"] = number(c.freeFactor);
  j["tailBound"] = number(c.tailBound);
  j["crossCheckLower"] = number(c.crossCheckLower);
  j["crossCheckHolds"] = c.crossCheckHolds;
  j["status"] = to_string(c.status);
  j["verdict"] = c.verdict;
  return j;
}

Json to_json(const FreezingScan& s) {
  Json j;
  Json list = Json::array();
  for (const auto& c : s.certificates) list.push_back(to_json(c));
  j["certificates"] = list;
  j["monotone"] = s.monotone;
  j["firstCertified"] = optional_json(s.firstCertified);
  return j;
}

Json to_json(const PressureCurve& c) {
  Json j;
  j["n"] = c.n;
  j["betas"] = numbers(c.betas);
  j["lower"] = numbers(c.lower);
  j["upper"] = numbers(c.upper);
  j["betaCStar"] = optional_json(c.betaCStar);
  j["betaCStarNote"] = "finite-size estimate: first grid beta with upper <= 10/n";
  return j;
}

Json to_json(const Xi1Transfer& t) {
  Json j;
  j["k"] = number(t.k);
  j["kPrime"] = number(t.kPrime);
  j["threshold"] = number(t.threshold);
  j["thresholdOverK"] = number(t.thresholdOverK);
  return j;
}

std::string csv(const RenormResult& r) {
  std::ostringstream out;
  out << "m,value,classification\n";
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    out << r.mMin + i << ',' << format_number(r.values[i]) << ',' << to_string(r.runningClass[i]) << '\n';
  }
  return out.str();
}

std::string csv(const PressureCurve& c) {
  std::ostringstream out;
  out << "beta,lower,upper\n";
  for (std::size_t i = 0; i < c.betas.size(); ++i) {
    out << format_number(c.betas[i]) << ',' << format_number(c.lower[i]) << ',' << format_number(c.upper[i]) << '\n';
  }
  return out.str();
}

std::string csv(const AccidentProfile& p) {
  std::ostringstream out;
  out << "i,time,gap,depth,Delta\n";
  out << 0 << ',' << 0 << ",," << p.delta0 << ",\n";
  for (std::size_t i = 0; i < p.times.size(); ++i) {
    out << i + 1 << ',' << p.times[i] << ',' << p.gaps[i] << ',' << p.depths[i + 1] << ',' << p.Deltas[i] << '\n';
  }
  return out.str();
}

std::string csv(const FreezingScan& s) {
  std::ostringstream out;
  out << "beta,cEF,operatorValue,tailBound,status,verdict\n";
  for (const auto& c : s.certificates) {
    out << format_number(c.beta) << ',' << format_number(c.cEF) << ',' << format_number(c.operatorValue) << ','
        << format_number(c.tailBound) << ',' << to_string(c.status) << ',' << (c.verdict ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace morphic
