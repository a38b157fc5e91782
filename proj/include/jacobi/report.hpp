#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "jacobi/coefficients.hpp"
#include "jacobi/critical.hpp"
#include "jacobi/eigensolve.hpp"
#include "jacobi/regime.hpp"
#include "jacobi/turan.hpp"
#include "jacobi/variation.hpp"

// Serialization of the analysis structures. All floating-point output goes
// through format_float so that two runs with the same config produce byte
// identical files.

namespace jacobi {

using ojson = nlohmann::ordered_json;

// Fixed 17-significant-digit formatting; round-trips any double.
std::string format_float(double x);

// dump with insertion order preserved and floats rendered by format_float.
// Non-finite values become the strings "nan", "inf", "-inf" (JSON has no
// literals for them).
std::string dump_json(const ojson& j);

std::uint64_t fnv1a64(std::string_view data);

// Hash of the canonical (whitespace-free) dump of the parsed config, so two
// textually different files with the same content hash alike.
std::string config_hash(const ojson& config);

// Wraps a report body with the library version and the config hash.
ojson with_provenance(const ojson& config, ojson body);

ojson vec2_json(const Vec2& v);
ojson mat2_json(const Mat2& m);

ojson to_json(const VariationReport& r, const std::string& name);
ojson to_json(const RegularHypothesisReport& r);
ojson to_json(const CriticalHypothesisReport& r);
ojson to_json(const RegularLimits& l);
ojson to_json(const RegimeVerdict& v);
ojson to_json(const GapEstimate& g);
ojson to_json(const CarlemanVerdict& v);
ojson to_json(const SandwichEstimate& s);
ojson to_json(const TuranTrace& t);
ojson to_json(const ProfileResult& p);
ojson to_json(const IgnjatovicResult& r);

std::string trajectory_csv(const Trajectory& t);
std::string poly_csv(const PolyTrajectory& t);
std::string turan_csv(const TuranTrace& t);
std::string profile_csv(const ProfileResult& p);

}  // namespace jacobi
