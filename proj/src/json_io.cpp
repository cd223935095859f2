#include "dqp/json_io.hpp"

#include <json.hpp>
#include <stdexcept>

namespace dqp {
namespace {

using Json = nlohmann::ordered_json;

Json deps_to_json(const std::vector<std::vector<DepList>>& inner,
                  const std::vector<DepList>& output) {
  Json rows = Json::array();
  for (std::size_t x = 0; x < inner.size(); ++x) {
    Json row = Json::array();
    for (const DepList& dl : inner[x]) {
      Json cell = Json::array();
      for (const VertexId& v : dl) cell.push_back(Json::array({v.x, v.y}));
      row.push_back(cell);
    }
    Json cell = Json::array();
    for (const VertexId& v : output[x]) cell.push_back(Json::array({v.x, v.y}));
    row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

void deps_from_json(const Json& rows, int n, int m,
                    std::vector<std::vector<DepList>>& inner,
                    std::vector<DepList>& output) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw std::invalid_argument("dependency rows must match n");
  inner.assign(n, {});
  output.assign(n, {});
  for (int x = 0; x < n; ++x) {
    const Json& row = rows[x];
    if (!row.is_array() || static_cast<int>(row.size()) != m + 1)
      throw std::invalid_argument("dependency row must have m+1 columns");
    for (int y = 0; y <= m; ++y) {
      DepList dl;
      for (const Json& v : row[y]) {
        if (!v.is_array() || v.size() != 2)
          throw std::invalid_argument("dependency entries are [row, column]");
        dl.push_back({v[0].get<int>(), v[1].get<int>()});
      }
      if (y < m)
        inner[x].push_back(std::move(dl));
      else
        output[x] = std::move(dl);
    }
  }
}

bool same_deps(const MeasurementPattern& a, const MeasurementPattern& b) {
  return a.x_deps == b.x_deps && a.z_deps == b.z_deps &&
         a.output_x_deps == b.output_x_deps && a.output_z_deps == b.output_z_deps;
}

}  // namespace

std::string pattern_to_json(const MeasurementPattern& p) {
  p.validate();
  Json j;
  j["n"] = p.n;
  j["m"] = p.m;
  Json angles = Json::array();
  for (const auto& row : p.angles) {
    Json r = Json::array();
    for (Angle8 a : row) r.push_back(a.k());
    angles.push_back(r);
  }
  j["angles"] = angles;
  MeasurementPattern flow = make_pattern(p.n, p.m, p.angles);
  if (same_deps(p, flow)) {
    j["x_deps"] = "flow";
    j["z_deps"] = "flow";
  } else {
    j["x_deps"] = deps_to_json(p.x_deps, p.output_x_deps);
    j["z_deps"] = deps_to_json(p.z_deps, p.output_z_deps);
  }
  return j.dump(2) + "\n";
}

MeasurementPattern pattern_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("pattern JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("m") || !j.contains("angles"))
    throw std::invalid_argument("pattern JSON needs n, m, and angles");
  int n = j["n"].get<int>();
  int m = j["m"].get<int>();
  if (n < 1 || m < 1) throw std::invalid_argument("pattern dims must be positive");
  const Json& ja = j["angles"];
  if (!ja.is_array() || static_cast<int>(ja.size()) != n)
    throw std::invalid_argument("angles must have n rows");
  std::vector<std::vector<Angle8>> angles(n);
  for (int x = 0; x < n; ++x) {
    if (!ja[x].is_array() || static_cast<int>(ja[x].size()) != m)
      throw std::invalid_argument("each angle row must have m entries");
    for (const Json& v : ja[x]) {
      int k = v.get<int>();
      if (k < 0 || k > 7)
        throw std::invalid_argument("angles must be integers 0..7");
      angles[x].push_back(Angle8(k));
    }
  }

  bool x_flow = !j.contains("x_deps") || (j["x_deps"].is_string() &&
                                          j["x_deps"].get<std::string>() == "flow");
  bool z_flow = !j.contains("z_deps") || (j["z_deps"].is_string() &&
                                          j["z_deps"].get<std::string>() == "flow");
  if (x_flow != z_flow)
    throw std::invalid_argument("x_deps and z_deps must both be explicit or both flow");
  if (x_flow) return make_pattern(n, m, std::move(angles));

  MeasurementPattern p;
  p.n = n;
  p.m = m;
  p.angles = std::move(angles);
  deps_from_json(j["x_deps"], n, m, p.x_deps, p.output_x_deps);
  deps_from_json(j["z_deps"], n, m, p.z_deps, p.output_z_deps);
  p.validate();
  return p;
}

std::string transcript_to_json(const Transcript& t) {
  Json j;
  j["mode"] = t.mode == RunMode::exact ? "exact" : "sample";
  j["seed"] = t.seed;
  Json rounds = Json::array();
  for (const TranscriptRound& r : t.rounds) {
    Json jr;
    jr["dir"] = r.dir == "a->b" ? "A→B" : "B→A";
    jr["kind"] = r.kind == "qubits" ? "qubit" : r.kind;
    if (r.value)
      jr["value"] = *r.value;
    else
      jr["value"] = nullptr;
    jr["dim"] = r.dim;
    rounds.push_back(jr);
  }
  j["rounds"] = rounds;
  j["output_dim"] = t.output_dim;
  return j.dump(2) + "\n";
}

namespace {

Json report_json(const SecurityReport& r) {
  Json j;
  j["check"] = r.check;
  if (r.epsilon)
    j["epsilon"] = *r.epsilon;
  else
    j["epsilon"] = nullptr;
  j["pass"] = r.pass;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["tol"] = r.tol;
  j["citation"] = r.citation;
  return j;
}

}  // namespace

std::string report_to_json(const SecurityReport& r) {
  return report_json(r).dump(2) + "\n";
}

std::string reports_to_json(std::uint64_t seed,
                            const std::vector<SecurityReport>& reports) {
  Json j;
  j["seed"] = seed;
  bool all = true;
  for (const auto& r : reports) all = all && r.pass;
  j["pass"] = all;
  Json cs = Json::array();
  for (const auto& r : reports) cs.push_back(report_json(r));
  j["criteria"] = cs;
  return j.dump(2) + "\n";
}

}  // namespace dqp
