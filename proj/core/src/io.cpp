#include "magnls/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace magnls {

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open '" + path + "' for writing");
  return os;
}

void write_coords(std::ostream& os, const Grid& g, std::size_t i) {
  for (int a = 0; a < g.dim(); ++a) os << format_number(g.coord(g.axis_index(i, a))) << ',';
}

void write_coord_header(std::ostream& os, int dim) {
  for (int a = 0; a < dim; ++a) os << 'x' << (a + 1) << ',';
}

}  // namespace

void write_field_csv(const std::string& path, const ComplexField& u) {
  const Grid& g = u.grid();
  auto os = open_out(path);
  write_coord_header(os, g.dim());
  os << "re,im\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    write_coords(os, g, i);
    os << format_number(u[i].real()) << ',' << format_number(u[i].imag()) << '\n';
  }
}

void write_real_csv(const std::string& path, const std::vector<RealField>& comps, const std::vector<std::string>& names) {
  if (comps.empty() || comps.size() != names.size()) throw ValidationError("column names do not match components");
  const Grid& g = comps.front().grid();
  auto os = open_out(path);
  write_coord_header(os, g.dim());
  for (std::size_t c = 0; c < names.size(); ++c) os << names[c] << (c + 1 < names.size() ? "," : "\n");
  for (std::size_t i = 0; i < g.size(); ++i) {
    write_coords(os, g, i);
    for (std::size_t c = 0; c < comps.size(); ++c) os << format_number(comps[c][i]) << (c + 1 < comps.size() ? "," : "\n");
  }
}

std::string grid_header_json(const Grid& g) {
  nlohmann::ordered_json j;
  j["dim"] = g.dim();
  j["extents"] = nlohmann::ordered_json::array();
  for (int a = 0; a < g.dim(); ++a) j["extents"].push_back({-g.L(), g.L()});
  j["n"] = g.n();
  j["h"] = g.h();
  return j.dump();
}

ComplexField read_field_csv(const std::string& path, const Grid& g) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open '" + path + "'");
  std::string line;
  std::getline(is, line);
  ComplexField u(g);
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (row >= g.size()) throw ValidationError("field file has more rows than grid nodes");
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(std::stod(cell));
    if (cols.size() != static_cast<std::size_t>(g.dim()) + 2) throw ValidationError("malformed field row");
    u[row++] = cplx(cols[cols.size() - 2], cols.back());
  }
  if (row != g.size()) throw ValidationError("field file has fewer rows than grid nodes");
  return u;
}

SyntheticSpec parse_synthetic_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("spec is not valid JSON: ") + e.what());
  }
  SyntheticSpec s;
  try {
    if (!j.is_object() || !j.contains("grid")) throw ValidationError("spec needs a \"grid\" object");
    const auto& g = j.at("grid");
    s.dim = g.at("dim").get<int>();
    s.L = g.at("L").get<double>();
    s.n = g.at("n").get<int>();
    s.field = j.value("field", s.field);
    s.K = j.value("K", s.K);
    s.p = j.value("p", s.p);
    s.lambda = j.value("lambda", s.lambda);
    s.quad_tol = j.value("quad_tol", s.quad_tol);
    for (const auto& pj : j.value("profiles", nlohmann::json::array())) {
      ProfileSpec p;
      p.shape = pj.value("shape", p.shape);
      if (p.shape != "gauss" && p.shape != "sech") throw ValidationError("unknown profile shape '" + p.shape + "'");
      p.amplitude = pj.value("amplitude", p.amplitude);
      p.width = pj.value("width", p.width);
      p.phase = pj.value("phase", p.phase);
      p.wavevector = pj.value("wavevector", std::vector<double>{});
      if (pj.contains("trajectory")) {
        const auto& t = pj.at("trajectory");
        p.start = t.value("start", std::vector<double>{});
        p.step = t.value("step", std::vector<double>{});
      }
      for (const auto* v : {&p.wavevector, &p.start, &p.step})
        if (v->size() > static_cast<std::size_t>(s.dim)) throw ValidationError("profile vector longer than grid dimension");
      s.profiles.push_back(std::move(p));
    }
    if (j.contains("noise")) {
      const auto& n = j.at("noise");
      s.noise_amplitude = n.value("amplitude", s.noise_amplitude);
      s.noise_decay = n.value("decay", s.noise_decay);
      s.seed = n.value("seed", s.seed);
    }
    if (j.contains("spreading")) {
      const auto& sp = j.at("spreading");
      s.spreading_amplitude = sp.value("amplitude", s.spreading_amplitude);
      s.spreading_width = sp.value("width", s.spreading_width);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed spec: ") + e.what());
  }
  if (s.K < 1) throw ValidationError("K must be positive");
  return s;
}

SyntheticSpec load_synthetic_spec(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open spec '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_synthetic_spec(ss.str());
}

}  // namespace magnls
