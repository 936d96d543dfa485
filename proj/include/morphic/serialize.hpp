#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "morphic/attractor.hpp"
#include "morphic/bispecial_structure.hpp"
#include "morphic/recognizability.hpp"
#include "morphic/renormalization.hpp"
#include "morphic/structure.hpp"
#include "morphic/thermodynamics.hpp"

namespace morphic {

using Json = nlohmann::ordered_json;

/// Twelve significant digits; non-finite values become "inf", "-inf", "nan".
std::string format_number(double v);
Json number(double v);

/// Rule text, or a JSON object mapping each letter to its image.
Substitution parse_substitution_source(std::string_view text);

/// "PREFIX(BLOCK)" is PREFIX·BLOCK^∞ and "PREFIX[a]" is PREFIX followed by
/// the fixed point starting with a. Words use the alphabet's symbols.
Tail parse_tail(const Alphabet& alphabet, std::string_view text);
std::string format_tail(const Alphabet& alphabet, const Tail& t);

/// {"alpha": 1, "logForm": false, "g": CYL, "h": CYL} with CYL either a number
/// or {"depth": d, "table": {"word": value, ...}, "fallback": value}.
Potential parse_potential(const Alphabet& alphabet, const Json& j);
Json to_json(const Alphabet& alphabet, const CylinderFunction& f);
Json to_json(const Alphabet& alphabet, const Potential& v);

Json to_json(const Alphabet& alphabet, const StructureReport& r);
Json to_json(const Alphabet& alphabet, const SpecialWordRecord& r);
Json to_json(const Alphabet& alphabet, const DesubReport& r);
Json to_json(const Alphabet& alphabet, const AccidentProfile& p);
Json to_json(const Alphabet& alphabet, const BispecialStructure& s);
Json to_json(const Alphabet& alphabet, const LengthCluster& c);
Json to_json(const RenormResult& r);
Json to_json(const LimitU& u);
Json to_json(const FreezingCertificate& c);
Json to_json(const FreezingScan& s);
Json to_json(const PressureCurve& c);
Json to_json(const Xi1Transfer& t);

std::string csv(const RenormResult& r);
std::string csv(const PressureCurve& c);
std::string csv(const AccidentProfile& p);
std::string csv(const FreezingScan& s);

}  // namespace morphic
