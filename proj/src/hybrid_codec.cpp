#include "samkit/hybrid_codec.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace samkit {

namespace {

constexpr std::string_view kThoughtMarker = "Thought:";
constexpr std::string_view kFinalAnswerMarker = "Final Answer:";

void require_finite_payload(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("payload field ") + name + " must be finite");
  }
}

bool variant_consistent(Intention intention, const HybridTrajectory& trajectory) {
  const bool keep = intention == Intention::kKeepLane;
  return keep == trajectory.is_coords();
}

// Strict parser over one contiguous buffer; pos is a byte offset into text.
struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool at_end() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) {
      ++pos;
    }
  }

  bool consume(std::string_view token) {
    if (text.substr(pos, token.size()) == token) {
      pos += token.size();
      return true;
    }
    return false;
  }
};

ParseError error_at(ParseErrorKind kind, std::size_t offset, std::string message) {
  return ParseError{kind, offset, std::move(message)};
}

// Fixed-notation double: optional '-', digits, optional '.' + digits.
// No exponents, no inf/nan.
std::optional<double> parse_number(Cursor& c, ParseError& err) {
  const std::size_t start = c.pos;
  std::size_t p = c.pos;
  if (p < c.text.size() && c.text[p] == '-') {
    ++p;
  }
  const std::size_t digits_start = p;
  while (p < c.text.size() && c.text[p] >= '0' && c.text[p] <= '9') {
    ++p;
  }
  if (p == digits_start) {
    err = error_at(ParseErrorKind::kMalformedNumber, start, "expected a number");
    return std::nullopt;
  }
  if (p < c.text.size() && c.text[p] == '.') {
    ++p;
    const std::size_t frac_start = p;
    while (p < c.text.size() && c.text[p] >= '0' && c.text[p] <= '9') {
      ++p;
    }
    if (p == frac_start) {
      err = error_at(ParseErrorKind::kMalformedNumber, start, "decimal point without digits");
      return std::nullopt;
    }
  }
  double value = 0.0;
  const auto result = std::from_chars(c.text.data() + start, c.text.data() + p, value,
                                      std::chars_format::fixed);
  if (result.ec != std::errc{} || result.ptr != c.text.data() + p || !std::isfinite(value)) {
    err = error_at(ParseErrorKind::kMalformedNumber, start, "unparseable number");
    return std::nullopt;
  }
  c.pos = p;
  return value;
}

std::optional<double> parse_keyed_number(Cursor& c, std::string_view key, ParseError& err) {
  if (!c.consume(key)) {
    err = error_at(ParseErrorKind::kUnexpectedToken, c.pos,
                   "expected '" + std::string(key) + "'");
    return std::nullopt;
  }
  return parse_number(c, err);
}

}  // namespace

const char* parse_error_kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kMissingFinalAnswer:
      return "missing_final_answer";
    case ParseErrorKind::kBadIntention:
      return "bad_intention";
    case ParseErrorKind::kWrongPointCount:
      return "wrong_point_count";
    case ParseErrorKind::kMalformedNumber:
      return "malformed_number";
    case ParseErrorKind::kVariantMismatch:
      return "variant_mismatch";
    case ParseErrorKind::kInvalidValue:
      return "invalid_value";
    case ParseErrorKind::kUnexpectedToken:
      return "unexpected_token";
  }
  return "unknown";
}

HybridTrajectory HybridTrajectory::coords(const std::array<CoordPoint, 4>& points) {
  for (const auto& p : points) {
    require_finite_payload(p.x, "x");
    require_finite_payload(p.y, "y");
  }
  HybridTrajectory t;
  t.value_ = points;
  return t;
}

HybridTrajectory HybridTrajectory::params(const SamPayload& payload) {
  require_finite_payload(payload.w, "W");
  require_finite_payload(payload.d, "D");
  require_finite_payload(payload.v0, "v0");
  require_finite_payload(payload.dvx, "dvx");
  if (!(payload.d > 0.0)) {
    throw std::invalid_argument("payload field D must be positive");
  }
  HybridTrajectory t;
  t.value_ = payload;
  return t;
}

ModelOutput ModelOutput::make(std::string thought, Intention intention,
                              HybridTrajectory trajectory) {
  if (!variant_consistent(intention, trajectory)) {
    throw CodecError("intention and trajectory variant disagree");
  }
  ModelOutput out;
  out.thought = std::move(thought);
  out.intention = intention;
  out.trajectory = std::move(trajectory);
  return out;
}

std::string format_fixed3(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", value);
  return buf;
}

double quantize3(double value) {
  const std::string text = format_fixed3(value);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out, std::chars_format::fixed);
  return out;
}

std::string serialize_output(const ModelOutput& out) {
  if (!variant_consistent(out.intention, out.trajectory)) {
    throw CodecError("cannot serialize: intention and trajectory variant disagree");
  }
  std::string text;
  text.reserve(out.thought.size() + 128);
  text += kThoughtMarker;
  text += ' ';
  text += out.thought;
  text += '\n';
  text += kFinalAnswerMarker;
  text += " intention=";
  text += static_cast<char>('0' + static_cast<int>(out.intention));
  text += "; trajectory=";
  if (out.trajectory.is_coords()) {
    text += "coords[";
    const auto& pts = out.trajectory.coord_points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) {
        text += ',';
      }
      text += '(';
      text += format_fixed3(pts[i].x);
      text += ',';
      text += format_fixed3(pts[i].y);
      text += ')';
    }
    text += ']';
  } else {
    const auto& p = out.trajectory.sam_params();
    text += "sam[W=";
    text += format_fixed3(p.w);
    text += ",D=";
    text += format_fixed3(p.d);
    text += ",v0=";
    text += format_fixed3(p.v0);
    text += ",dvx=";
    text += format_fixed3(p.dvx);
    text += ']';
  }
  return text;
}

ParseOutcome try_parse_output(std::string_view text) {
  ParseOutcome outcome;
  ParseError err;

  const std::size_t answer_pos = text.rfind(kFinalAnswerMarker);
  if (answer_pos == std::string_view::npos) {
    outcome.error = error_at(ParseErrorKind::kMissingFinalAnswer, 0,
                             "no 'Final Answer:' marker in output");
    return outcome;
  }

  // Everything before the final marker is the thought region.
  std::string thought;
  {
    Cursor head{text.substr(0, answer_pos), 0};
    head.skip_ws();
    if (head.consume(kThoughtMarker)) {
      std::size_t begin = head.pos;
      if (begin < head.text.size() && head.text[begin] == ' ') {
        ++begin;  // the single space serialize() emits
      }
      std::string_view body = head.text.substr(begin);
      if (!body.empty() && body.back() == '\n') {
        body.remove_suffix(1);
      }
      thought = std::string(body);
    } else if (head.pos != head.text.size()) {
      outcome.error = error_at(ParseErrorKind::kUnexpectedToken, head.pos,
                               "text before 'Final Answer:' must start with 'Thought:'");
      return outcome;
    }
  }

  Cursor c{text, answer_pos + kFinalAnswerMarker.size()};
  c.skip_ws();
  if (!c.consume("intention=")) {
    outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos, "expected 'intention='");
    return outcome;
  }

  const std::size_t intent_pos = c.pos;
  if (c.at_end() || c.peek() < '0' || c.peek() > '2' ||
      (c.pos + 1 < text.size() && text[c.pos + 1] >= '0' && text[c.pos + 1] <= '9')) {
    outcome.error = error_at(ParseErrorKind::kBadIntention, intent_pos,
                             "intention must be one of 0, 1, 2");
    return outcome;
  }
  const auto intention = static_cast<Intention>(c.peek() - '0');
  ++c.pos;

  if (!c.consume(";")) {
    outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos, "expected ';'");
    return outcome;
  }
  c.skip_ws();
  const std::size_t trajectory_pos = c.pos;
  if (!c.consume("trajectory=")) {
    outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos, "expected 'trajectory='");
    return outcome;
  }

  std::optional<HybridTrajectory> trajectory;
  if (c.consume("coords[")) {
    if (intention != Intention::kKeepLane) {
      outcome.error = error_at(ParseErrorKind::kVariantMismatch, trajectory_pos,
                               "coords payload requires intention=0");
      return outcome;
    }
    std::array<CoordPoint, 4> pts{};
    for (int i = 0; i < 4; ++i) {
      if (i > 0 && !c.consume(",")) {
        if (!c.at_end() && c.peek() == ']') {
          outcome.error = error_at(ParseErrorKind::kWrongPointCount, c.pos,
                                   "coords payload must contain exactly 4 points");
        } else {
          outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos, "expected ','");
        }
        return outcome;
      }
      if (!c.consume("(")) {
        outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos, "expected '('");
        return outcome;
      }
      const auto x = parse_number(c, err);
      if (!x) {
        outcome.error = err;
        return outcome;
      }
      if (!c.consume(",")) {
        outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos, "expected ','");
        return outcome;
      }
      const auto y = parse_number(c, err);
      if (!y) {
        outcome.error = err;
        return outcome;
      }
      if (!c.consume(")")) {
        outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos, "expected ')'");
        return outcome;
      }
      pts[static_cast<std::size_t>(i)] = CoordPoint{*x, *y};
    }
    if (!c.consume("]")) {
      if (!c.at_end() && c.peek() == ',') {
        outcome.error = error_at(ParseErrorKind::kWrongPointCount, c.pos,
                                 "coords payload must contain exactly 4 points");
      } else {
        outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos, "expected ']'");
      }
      return outcome;
    }
    trajectory = HybridTrajectory::coords(pts);
  } else if (c.consume("sam[")) {
    if (intention == Intention::kKeepLane) {
      outcome.error = error_at(ParseErrorKind::kVariantMismatch, trajectory_pos,
                               "sam payload requires intention=1 or intention=2");
      return outcome;
    }
    const std::size_t payload_pos = c.pos;
    const auto w = parse_keyed_number(c, "W=", err);
    if (!w) {
      outcome.error = err;
      return outcome;
    }
    const auto d = parse_keyed_number(c, ",D=", err);
    if (!d) {
      outcome.error = err;
      return outcome;
    }
    const auto v0 = parse_keyed_number(c, ",v0=", err);
    if (!v0) {
      outcome.error = err;
      return outcome;
    }
    const auto dvx = parse_keyed_number(c, ",dvx=", err);
    if (!dvx) {
      outcome.error = err;
      return outcome;
    }
    if (!c.consume("]")) {
      outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos, "expected ']'");
      return outcome;
    }
    if (!(*d > 0.0)) {
      outcome.error = error_at(ParseErrorKind::kInvalidValue, payload_pos,
                               "sam payload requires D > 0");
      return outcome;
    }
    trajectory = HybridTrajectory::params(SamPayload{*w, *d, *v0, *dvx});
  } else {
    outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos,
                             "expected 'coords[' or 'sam['");
    return outcome;
  }

  c.skip_ws();
  if (!c.at_end()) {
    outcome.error = error_at(ParseErrorKind::kUnexpectedToken, c.pos,
                             "trailing content after trajectory payload");
    return outcome;
  }

  outcome.output = ModelOutput::make(std::move(thought), intention, std::move(*trajectory));
  return outcome;
}

ModelOutput parse_output(std::string_view text) {
  ParseOutcome outcome = try_parse_output(text);
  if (!outcome.ok()) {
    const ParseError& e = *outcome.error;
    throw CodecError(std::string(parse_error_kind_name(e.kind)) + " at byte " +
                     std::to_string(e.offset) + ": " + e.message);
  }
  return std::move(*outcome.output);
}

int payload_size(const HybridTrajectory& trajectory) {
  return trajectory.is_coords() ? 8 : 4;
}

}  // namespace samkit
