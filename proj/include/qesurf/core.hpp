#pragma once

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace qesurf {

using Complex = std::complex<double>;

// Field storage: (nx, ny) arrays, row index i <-> x, column index j <-> y.
// Columns are x-lines (contiguous), rows are y-lines.
using ArrC = Eigen::ArrayXXcd;
using ArrR = Eigen::ArrayXXd;
using ArrB = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridError : Error { using Error::Error; };
struct StencilError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct GeometryError : Error { using Error::Error; };
struct GaugeError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct AccuracyError : Error { using Error::Error; };
struct BranchError : Error { using Error::Error; };
struct ConstraintError : Error { using Error::Error; };
struct ContractError : Error { using Error::Error; };

// Thread cap from QESURF_THREADS (default 1).
int max_threads();

// Static partition of [0, n); fn(begin, end) per chunk. Deterministic.
void parallel_for(std::ptrdiff_t n,
                  const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& fn);

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace qesurf
