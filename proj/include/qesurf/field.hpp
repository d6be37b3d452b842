#pragma once

#include <functional>
#include <memory>

#include "qesurf/grid.hpp"

namespace qesurf {

// Complex scalar field on a chart. Real-valued fields carry zero imaginary
// part; that is an assertable invariant, not a type split.
struct ScalarField {
  std::shared_ptr<const ChartGrid> grid;
  ArrC v;

  ScalarField() = default;
  explicit ScalarField(std::shared_ptr<const ChartGrid> g)
      : grid(std::move(g)), v(ArrC::Zero(grid->nx(), grid->ny())) {}
  ScalarField(std::shared_ptr<const ChartGrid> g, ArrC values)
      : grid(std::move(g)), v(std::move(values)) {}

  double sup_abs(int collar = 0) const;
  double sup_imag(int collar = 0) const;
  ArrR real_part() const { return v.real(); }
};

ScalarField make_field(std::shared_ptr<const ChartGrid> g,
                       const std::function<Complex(double, double)>& f);
ScalarField constant_field(std::shared_ptr<const ChartGrid> g, Complex value);

// 1-form a_x dx + a_y dy with complex components.
struct OneForm {
  std::shared_ptr<const ChartGrid> grid;
  ArrC ax, ay;

  OneForm() = default;
  explicit OneForm(std::shared_ptr<const ChartGrid> g)
      : grid(std::move(g)),
        ax(ArrC::Zero(grid->nx(), grid->ny())),
        ay(ArrC::Zero(grid->nx(), grid->ny())) {}
};

OneForm make_oneform(std::shared_ptr<const ChartGrid> g,
                     const std::function<Complex(double, double)>& fx,
                     const std::function<Complex(double, double)>& fy);

enum class Gauge { Conformal, Diagonal, General };

// Symmetric 2D metric. Conformal metrics retain H with g = 2 e^H (dx^2+dy^2).
struct Metric2D {
  std::shared_ptr<const ChartGrid> grid;
  Gauge gauge = Gauge::General;
  ArrR gxx, gxy, gyy;
  std::optional<ArrR> H;  // set in conformal gauge

  Metric2D() = default;

  ArrR det() const { return gxx * gyy - gxy * gxy; }
  void check_riemannian() const;
};

Metric2D conformal_metric(std::shared_ptr<const ChartGrid> g, const ArrR& H);
Metric2D flat_metric(std::shared_ptr<const ChartGrid> g);
Metric2D general_metric(std::shared_ptr<const ChartGrid> g,
                        ArrR gxx, ArrR gxy, ArrR gyy);

// Pointwise 2x2 complex matrix field, stored per component.
struct Mat2Field {
  std::shared_ptr<const ChartGrid> grid;
  ArrC a00, a01, a10, a11;

  Mat2Field() = default;
  explicit Mat2Field(std::shared_ptr<const ChartGrid> g)
      : grid(std::move(g)),
        a00(ArrC::Zero(grid->nx(), grid->ny())),
        a01(a00), a10(a00), a11(a00) {}

  ArrC trace() const { return a00 + a11; }
  double sup_norm(int collar = 0) const;  // pointwise Frobenius, sup over interior
};

Mat2Field matmul(const Mat2Field& a, const Mat2Field& b);
Mat2Field commutator(const Mat2Field& a, const Mat2Field& b);
Mat2Field adjoint(const Mat2Field& a);   // pointwise conjugate transpose
Mat2Field operator+(const Mat2Field& a, const Mat2Field& b);
Mat2Field operator-(const Mat2Field& a, const Mat2Field& b);
Mat2Field scale(const Mat2Field& a, Complex s);
Mat2Field scale(const Mat2Field& a, const ArrC& s);
Mat2Field inverse(const Mat2Field& a);

// Frobenius norm field of a 2x2 matrix field.
ArrR frobenius(const Mat2Field& a);

// Pointwise evaluation off nodes by tensor-product Lagrange interpolation on
// the nearest window (full-rectangle charts only).
Complex sample(const ScalarField& f, double x, double y, int window = 8);

double sup_over(const ArrR& absfield, const ArrB& where);

}  // namespace qesurf
