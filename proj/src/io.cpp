#include "qesurf/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace qesurf {

namespace {

void write_rows(std::ostream& os, const ScalarField& f, const std::string& tag) {
  const ChartGrid& g = *f.grid;
  os.precision(17);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!tag.empty()) os << tag << ',';
      os << g.x(i) << ',' << g.y(j) << ',' << f.v(i, j).real() << ','
         << f.v(i, j).imag() << '\n';
    }
}

}  // namespace

void write_field_csv(std::ostream& os, const ScalarField& f) {
  os << "x,y,re,im\n";
  write_rows(os, f, "");
}

ScalarField read_field_csv(std::istream& is, std::shared_ptr<const ChartGrid> grid) {
  std::string line;
  if (!std::getline(is, line)) throw DomainError("empty field file");
  ScalarField f(grid);
  int count = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double x, y, re, im;
    char comma;
    if (!(ss >> x >> comma >> y >> comma >> re >> comma >> im))
      throw DomainError("malformed field row: " + line);
    auto [i, j] = grid->node_at(x, y);
    f.v(i, j) = Complex(re, im);
    ++count;
  }
  if (count != grid->nx() * grid->ny())
    throw DomainError("field file does not cover the grid");
  return f;
}

void write_matrix_csv(std::ostream& os, const Mat2Field& m) {
  const ChartGrid& g = *m.grid;
  os << "x,y,re00,im00,re01,im01,re10,im10,re11,im11\n";
  os.precision(17);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      os << g.x(i) << ',' << g.y(j);
      for (const ArrC* c : {&m.a00, &m.a01, &m.a10, &m.a11})
        os << ',' << (*c)(i, j).real() << ',' << (*c)(i, j).imag();
      os << '\n';
    }
}

void write_bundle(std::ostream& os, const StructureBundle& b) {
  os << "# qesurf-bundle\n";
  os << "# grid: " << b.grid->descriptor_json() << '\n';
  for (const auto& [k, v] : b.meta) os << "# meta " << k << ' ' << v << '\n';
  os << "field,x,y,re,im\n";
  for (const auto& [name, f] : b.fields) write_rows(os, f, name);
}

StructureBundle read_bundle(std::istream& is) {
  StructureBundle b;
  std::string line;
  if (!std::getline(is, line) || line.rfind("# qesurf-bundle", 0) != 0)
    throw DomainError("not a structure bundle");
  while (is.peek() == '#') {
    std::getline(is, line);
    if (line.rfind("# grid: ", 0) == 0) {
      b.grid = std::make_shared<ChartGrid>(
          ChartGrid::from_descriptor_json(line.substr(8)));
    } else if (line.rfind("# meta ", 0) == 0) {
      std::istringstream ss(line.substr(7));
      std::string key;
      ss >> key;
      std::string value;
      std::getline(ss, value);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      b.meta[key] = value;
    }
  }
  if (!b.grid) throw DomainError("bundle is missing its grid descriptor");
  std::getline(is, line);  // column header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    size_t c1 = line.find(',');
    std::string name = line.substr(0, c1);
    std::istringstream ss(line.substr(c1 + 1));
    double x, y, re, im;
    char comma;
    if (!(ss >> x >> comma >> y >> comma >> re >> comma >> im))
      throw DomainError("malformed bundle row: " + line);
    auto it = b.fields.find(name);
    if (it == b.fields.end())
      it = b.fields.emplace(name, ScalarField(b.grid)).first;
    auto [i, j] = b.grid->node_at(x, y);
    it->second.v(i, j) = Complex(re, im);
  }
  return b;
}

StructureBundle bundle_from_structure(const QEStructure& s) {
  StructureBundle b;
  b.grid = s.grid;
  if (s.gauge == Gauge::Conformal && s.H && s.P) {
    b.meta["gauge"] = "conformal";
    b.fields.emplace("H", ScalarField{s.grid, s.H->cast<Complex>()});
    b.fields.emplace("P", ScalarField{s.grid, *s.P});
  } else {
    b.meta["gauge"] = "general";
    b.fields.emplace("gxx", ScalarField{s.grid, s.g.gxx.cast<Complex>()});
    b.fields.emplace("gxy", ScalarField{s.grid, s.g.gxy.cast<Complex>()});
    b.fields.emplace("gyy", ScalarField{s.grid, s.g.gyy.cast<Complex>()});
    b.fields.emplace("Xx", ScalarField{s.grid, s.xflat.ax});
    b.fields.emplace("Xy", ScalarField{s.grid, s.xflat.ay});
  }
  return b;
}

QEStructure structure_from_bundle(const StructureBundle& b) {
  auto gauge = b.meta.find("gauge");
  if (gauge == b.meta.end()) throw DomainError("bundle is missing the gauge tag");
  if (gauge->second == "conformal") {
    return conformal_structure(b.grid, b.fields.at("H").v.real(), b.fields.at("P").v);
  }
  Metric2D g = general_metric(b.grid, b.fields.at("gxx").v.real(),
                              b.fields.at("gxy").v.real(), b.fields.at("gyy").v.real());
  OneForm x(b.grid);
  x.ax = b.fields.at("Xx").v;
  x.ay = b.fields.at("Xy").v;
  return general_structure(std::move(g), std::move(x));
}

}  // namespace qesurf
