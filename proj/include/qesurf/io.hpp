#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "qesurf/hitchin.hpp"
#include "qesurf/qee.hpp"

namespace qesurf {

// Scalar field CSV: header x,y,re,im; rows y-outer (x varies fastest).
void write_field_csv(std::ostream& os, const ScalarField& f);
ScalarField read_field_csv(std::istream& is, std::shared_ptr<const ChartGrid> grid);

// Matrix field CSV: x,y,re00,im00,re01,im01,re10,im10,re11,im11.
void write_matrix_csv(std::ostream& os, const Mat2Field& m);

// Structure bundle: one CSV stream carrying several named fields plus
// metadata comment lines, so a whole structure round-trips through a file.
//   # qesurf-bundle
//   # grid: {...}
//   # meta key value
//   field,x,y,re,im
struct StructureBundle {
  std::shared_ptr<const ChartGrid> grid;
  std::map<std::string, ScalarField> fields;
  std::map<std::string, std::string> meta;
};

void write_bundle(std::ostream& os, const StructureBundle& b);
StructureBundle read_bundle(std::istream& is);

StructureBundle bundle_from_structure(const QEStructure& s);
QEStructure structure_from_bundle(const StructureBundle& b);

}  // namespace qesurf
