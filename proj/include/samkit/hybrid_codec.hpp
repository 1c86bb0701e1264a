#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "samkit/types.hpp"

namespace samkit {

// Predicted maneuver parameters as they travel on the wire (vx0 is known
// context at the crossing, never predicted).
struct SamPayload {
  double w = 0.0;
  double d = 0.0;
  double v0 = 0.0;
  double dvx = 0.0;
};

struct CoordPoint {
  double x = 0.0;
  double y = 0.0;
};

// Either four (x, y) coordinates at t = 1..4 s, or maneuver parameters.
class HybridTrajectory {
 public:
  static HybridTrajectory coords(const std::array<CoordPoint, 4>& points);
  static HybridTrajectory params(const SamPayload& payload);

  bool is_coords() const { return std::holds_alternative<std::array<CoordPoint, 4>>(value_); }
  bool is_params() const { return !is_coords(); }
  const std::array<CoordPoint, 4>& coord_points() const {
    return std::get<std::array<CoordPoint, 4>>(value_);
  }
  const SamPayload& sam_params() const { return std::get<SamPayload>(value_); }

 private:
  HybridTrajectory() = default;
  std::variant<std::array<CoordPoint, 4>, SamPayload> value_;
};

// One parsed model response: free-form reasoning, intention, trajectory.
struct ModelOutput {
  std::string thought;
  Intention intention = Intention::kKeepLane;
  HybridTrajectory trajectory = HybridTrajectory::params(SamPayload{0.0, 1.0, 0.0, 0.0});

  // Enforces the case split: keep-lane <-> coords, lane change <-> params.
  static ModelOutput make(std::string thought, Intention intention, HybridTrajectory trajectory);
};

enum class ParseErrorKind {
  kMissingFinalAnswer,
  kBadIntention,
  kWrongPointCount,
  kMalformedNumber,
  kVariantMismatch,
  kInvalidValue,
  kUnexpectedToken,
};

const char* parse_error_kind_name(ParseErrorKind kind);

struct ParseError {
  ParseErrorKind kind = ParseErrorKind::kUnexpectedToken;
  std::size_t offset = 0;  // byte offset into the input text
  std::string message;
};

struct ParseOutcome {
  std::optional<ModelOutput> output;
  std::optional<ParseError> error;

  bool ok() const { return output.has_value(); }
};

class CodecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Emits exactly:
//   Thought: <thought>\nFinal Answer: intention=<0|1|2>; trajectory=coords[(x1,y1),...,(x4,y4)]
// or, for lane changes:
//   ...; trajectory=sam[W=<w>,D=<d>,v0=<v>,dvx=<a>]
// All numbers are fixed-point with 3 decimals. Throws CodecError when the
// intention and payload variant disagree.
std::string serialize_output(const ModelOutput& out);

// Strict parse of the grammar above. Leading/trailing whitespace is
// tolerated; the thought is everything between "Thought:" and the last
// "Final Answer:" marker. Never throws; failures come back as a typed
// error with the byte offset of the first offending character.
ParseOutcome try_parse_output(std::string_view text);

// Throwing convenience wrapper around try_parse_output.
ModelOutput parse_output(std::string_view text);

// Number of scalars a payload puts on the wire: 8 for coords, 4 for params.
int payload_size(const HybridTrajectory& trajectory);

// The coordinate-sequence baseline this codec's parametric payload is
// measured against: 20 points, 40 scalars.
inline constexpr int kBaselineCoordPointCount = 20;
inline constexpr int kBaselineCoordScalarCount = 40;

// Fixed-point rendering used for every wire number ("%.3f").
std::string format_fixed3(double value);

// Value after a serialize/parse round trip (3-decimal quantization).
double quantize3(double value);

}  // namespace samkit
