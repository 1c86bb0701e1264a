#include <json.hpp>

#include "samkit/fileio.hpp"
#include "samkit/scenario_data.hpp"

namespace samkit {

namespace {

using Json = nlohmann::ordered_json;

Json state_to_json(const VehicleState& s) {
  return Json{{"frame", s.frame}, {"vehicle_id", s.vehicle_id}, {"x", s.x},   {"y", s.y},
              {"vx", s.vx},       {"vy", s.vy},                 {"ax", s.ax}, {"ay", s.ay},
              {"lane_id", s.lane_id}};
}

VehicleState state_from_json(const Json& j) {
  VehicleState s;
  s.frame = j.at("frame").get<std::int64_t>();
  s.vehicle_id = j.at("vehicle_id").get<std::int64_t>();
  s.x = j.at("x").get<double>();
  s.y = j.at("y").get<double>();
  s.vx = j.at("vx").get<double>();
  s.vy = j.at("vy").get<double>();
  s.ax = j.at("ax").get<double>();
  s.ay = j.at("ay").get<double>();
  s.lane_id = j.at("lane_id").get<int>();
  return s;
}

Json kinematic_to_json(const KinematicState& s) {
  return Json{{"t", s.t}, {"x", s.x}, {"y", s.y}, {"vx", s.vx}, {"vy", s.vy}, {"ay", s.ay}};
}

KinematicState kinematic_from_json(const Json& j) {
  KinematicState s;
  s.t = j.at("t").get<double>();
  s.x = j.at("x").get<double>();
  s.y = j.at("y").get<double>();
  s.vx = j.at("vx").get<double>();
  s.vy = j.at("vy").get<double>();
  s.ay = j.at("ay").get<double>();
  return s;
}

}  // namespace

std::string scenario_to_json_line(const Scenario& s) {
  Json j;
  j["id"] = s.id;
  j["label"] = static_cast<int>(s.label);
  j["sample_rate"] = s.sample_rate;
  j["history"] = Json::array();
  for (const auto& state : s.history) {
    j["history"].push_back(state_to_json(state));
  }
  j["insertion"] = state_to_json(s.insertion);
  j["future"] = Json{{"dt", s.future.dt}, {"samples", Json::array()}};
  for (const auto& sample : s.future.samples) {
    j["future"]["samples"].push_back(kinematic_to_json(sample));
  }
  j["neighbors"] = Json::object();
  for (const auto& [slot, state] : s.neighbors) {
    j["neighbors"][neighbor_slot_name(slot)] = state_to_json(state);
  }
  if (s.hidden_params) {
    const SamParams& p = *s.hidden_params;
    j["hidden_params"] =
        Json{{"W", p.w}, {"D", p.d}, {"v0", p.v0}, {"dvx", p.dvx}, {"vx0", p.vx0}};
  }
  return j.dump();
}

Scenario scenario_from_json_line(const std::string& line) {
  const Json j = Json::parse(line);
  Scenario s;
  s.id = j.at("id").get<std::string>();
  const int label = j.at("label").get<int>();
  if (label < 0 || label > 2) {
    throw std::invalid_argument("label must be 0, 1 or 2");
  }
  s.label = static_cast<Intention>(label);
  s.sample_rate = j.at("sample_rate").get<double>();
  for (const auto& state : j.at("history")) {
    s.history.push_back(state_from_json(state));
  }
  s.insertion = state_from_json(j.at("insertion"));
  std::vector<KinematicState> samples;
  for (const auto& sample : j.at("future").at("samples")) {
    samples.push_back(kinematic_from_json(sample));
  }
  s.future = Trajectory::make(std::move(samples), j.at("future").at("dt").get<double>());
  if (j.contains("neighbors")) {
    for (const auto& [name, state] : j.at("neighbors").items()) {
      const auto slot = neighbor_slot_from_name(name);
      if (!slot) {
        throw std::invalid_argument("unknown neighbor slot '" + name + "'");
      }
      s.neighbors[*slot] = state_from_json(state);
    }
  }
  if (j.contains("hidden_params")) {
    const Json& p = j.at("hidden_params");
    s.hidden_params = SamParams::make(p.at("W").get<double>(), p.at("D").get<double>(),
                                      p.at("v0").get<double>(), p.at("dvx").get<double>(),
                                      p.at("vx0").get<double>());
  }
  return s;
}

void save_scenarios(const std::filesystem::path& path, const std::vector<Scenario>& scenarios) {
  std::string out;
  for (const auto& s : scenarios) {
    out += scenario_to_json_line(s);
    out += '\n';
  }
  atomic_write_text(path, out);
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<Scenario> scenarios;
  std::size_t pos = 0;
  long line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) {
      end = text.size();
    }
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      scenarios.push_back(scenario_from_json_line(line));
    } catch (const std::exception& e) {
      throw DataError(DataErrorKind::kBadRecord, path.string(), line_no, e.what());
    }
  }
  return scenarios;
}

}  // namespace samkit
