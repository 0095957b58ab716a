#include "geomonge/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace geomonge {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IO_ERROR, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IO_ERROR, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorCode::IO_ERROR, "short write to " + path);
}

Json load_json(const std::string& path) {
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::IO_ERROR, path + ": " + e.what());
  }
}

void save_json(const Json& j, const std::string& path) {
  write_file(path, j.dump(2) + "\n");
}

Json space_to_json(const FiniteGeodesicSpace& sp) {
  Json j;
  j["n"] = sp.n;
  if (!sp.labels.empty()) j["labels"] = sp.labels;
  j["d"] = sp.d;
  Json dl = Json::array();
  for (double v : sp.dL) {
    if (is_inf(v))
      dl.push_back("inf");
    else
      dl.push_back(v);
  }
  j["dL"] = dl;
  j["tol"] = sp.tol;
  return j;
}

FiniteGeodesicSpace space_from_json(const Json& j) {
  FiniteGeodesicSpace sp;
  if (!j.contains("n")) fail(ErrorCode::IO_ERROR, "space file lacks \"n\"");
  sp.n = j["n"].get<int>();
  if (j.contains("labels")) sp.labels = j["labels"].get<std::vector<std::vector<double>>>();
  sp.tol = j.value("tol", 1e-9);

  size_t nn = static_cast<size_t>(sp.n) * sp.n;
  if (j.contains("d")) {
    sp.d = j["d"].get<std::vector<double>>();
  } else if (j.value("metric", "") == "euclidean") {
    if (sp.labels.size() != static_cast<size_t>(sp.n))
      fail(ErrorCode::IO_ERROR, "euclidean metric needs one label tuple per point");
    sp.d.assign(nn, 0.0);
    for (int a = 0; a < sp.n; ++a)
      for (int b = 0; b < sp.n; ++b) {
        double s = 0.0;
        for (size_t c = 0; c < sp.labels[a].size(); ++c) {
          double diff = sp.labels[a][c] - sp.labels[b][c];
          s += diff * diff;
        }
        sp.d[static_cast<size_t>(a) * sp.n + b] = std::sqrt(s);
      }
  } else {
    fail(ErrorCode::IO_ERROR, "space file needs \"d\" or \"metric\":\"euclidean\"");
  }
  if (sp.d.size() != nn) fail(ErrorCode::IO_ERROR, "\"d\" has wrong length");

  if (!j.contains("dL")) fail(ErrorCode::IO_ERROR, "space file lacks \"dL\"");
  sp.dL.reserve(nn);
  for (const auto& v : j["dL"]) {
    if (v.is_string()) {
      if (v.get<std::string>() != "inf")
        fail(ErrorCode::IO_ERROR, "dL entries must be numbers or \"inf\"");
      sp.dL.push_back(kInf);
    } else {
      sp.dL.push_back(v.get<double>());
    }
  }
  if (sp.dL.size() != nn) fail(ErrorCode::IO_ERROR, "\"dL\" has wrong length");
  return sp;
}

Json plan_to_json(const TransportPlan& plan) {
  Json j;
  Json entries = Json::array();
  for (const PlanEntry& e : plan.entries) entries.push_back({e.src, e.dst, e.mass});
  j["entries"] = entries;
  if (plan.cost_cache) j["cost"] = *plan.cost_cache;
  return j;
}

TransportPlan plan_from_json(const Json& j, int n) {
  std::vector<PlanEntry> entries;
  for (const auto& e : j.at("entries"))
    entries.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  TransportPlan plan = TransportPlan::from_entries(n, std::move(entries));
  if (j.contains("cost")) plan.cost_cache = j["cost"].get<double>();
  return plan;
}

Json rays_to_json(const RaySystem& rs) {
  Json j;
  j["n"] = rs.n;
  j["section"] = rs.section;
  Json rays = Json::array();
  for (const GeodesicPath& ray : rs.rays) {
    Json r;
    r["points"] = ray.points;
    r["params"] = ray.params;
    rays.push_back(r);
  }
  j["rays"] = rays;
  Json a = Json::object(), b = Json::object();
  for (size_t r = 0; r < rs.rays.size(); ++r) {
    int rep = rs.section[r];
    if (rs.a_map[rep] >= 0) a[std::to_string(r)] = rs.a_map[rep];
    if (rs.b_map[rep] >= 0) b[std::to_string(r)] = rs.b_map[rep];
  }
  j["a"] = a;
  j["b"] = b;
  Json iso = Json::array();
  for (auto& [x, y] : rs.isolated_pairs) iso.push_back({x, y});
  j["isolated"] = iso;
  return j;
}

RaySystem rays_from_json(const Json& j) {
  RaySystem rs;
  rs.n = j.at("n").get<int>();
  rs.section = j.at("section").get<std::vector<int>>();
  std::vector<int> ray_a(rs.section.size(), -1), ray_b(rs.section.size(), -1);
  for (auto& [key, val] : j.at("a").items()) ray_a[std::stoul(key)] = val.get<int>();
  for (auto& [key, val] : j.at("b").items()) ray_b[std::stoul(key)] = val.get<int>();

  rs.a_map.assign(rs.n, -1);
  rs.b_map.assign(rs.n, -1);
  rs.quotient.assign(rs.n, -1);
  std::vector<std::pair<int, int>> G;
  std::vector<bool> inT(rs.n, false);

  int idx = 0;
  for (const auto& rj : j.at("rays")) {
    GeodesicPath ray;
    ray.points = rj.at("points").get<std::vector<int>>();
    ray.params = rj.at("params").get<std::vector<double>>();
    for (size_t i = 0; i < ray.points.size(); ++i)
      for (size_t k = i; k < ray.points.size(); ++k)
        G.push_back({ray.points[i], ray.points[k]});
    for (int p : ray.points) {
      bool endpoint = (p == ray_a[idx] || p == ray_b[idx]);
      if (!endpoint) {
        rs.quotient[p] = idx;
        inT[p] = true;
        rs.a_map[p] = ray_a[idx];
        rs.b_map[p] = ray_b[idx];
      }
    }
    rs.rays.push_back(std::move(ray));
    ++idx;
  }
  for (const auto& e : j.value("isolated", Json::array())) {
    rs.isolated_pairs.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    G.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    G.push_back({e.at(0).get<int>(), e.at(0).get<int>()});
    G.push_back({e.at(1).get<int>(), e.at(1).get<int>()});
  }
  std::sort(G.begin(), G.end());
  G.erase(std::unique(G.begin(), G.end()), G.end());
  rs.G = G;
  std::tie(rs.T_points, rs.Te_points) = transport_sets(rs.n, rs.G);
  return rs;
}

DiscreteMeasure measure_from_csv(const std::string& path, int n) {
  std::istringstream in(read_file(path));
  std::vector<double> w(n, 0.0);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b))
      fail(ErrorCode::IO_ERROR, path + ":" + std::to_string(lineno) + ": want index,weight");
    try {
      int idx = std::stoi(a);
      double val = std::stod(b);
      if (idx < 0 || idx >= n)
        fail(ErrorCode::IO_ERROR, path + ":" + std::to_string(lineno) + ": index out of range");
      w[idx] += val;
    } catch (const std::invalid_argument&) {
      if (lineno == 1) continue;  // header row
      fail(ErrorCode::IO_ERROR, path + ":" + std::to_string(lineno) + ": not numeric");
    }
  }
  return DiscreteMeasure::from_weights(std::move(w));
}

void measure_to_csv(const DiscreteMeasure& mu, const std::string& path) {
  std::ostringstream out;
  out << "point_index,weight\n";
  for (int i = 0; i < mu.size(); ++i)
    if (mu[i] != 0) out << i << "," << Json(mu[i]).dump() << "\n";
  write_file(path, out.str());
}

void interval_table_to_csv(const DiscreteCurrent& cur, const std::string& path) {
  std::ostringstream out;
  out << "ray,cell,param_lo,param_hi,value\n";
  for (size_t r = 0; r < cur.coeff.size(); ++r)
    for (size_t i = 0; i < cur.coeff[r].size(); ++i)
      out << r << "," << i << "," << Json(cur.params[r][i]).dump() << ","
          << Json(cur.params[r][i + 1]).dump() << ","
          << Json(cur.m[r] * cur.coeff[r][i]).dump() << "\n";
  write_file(path, out.str());
}

}  // namespace geomonge
