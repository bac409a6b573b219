#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "igenkrylov/solve.hpp"
#include "igenkrylov/tomo.hpp"
#include "igenkrylov/types.hpp"

namespace igenkrylov::io {

/// Formats a double so that it round-trips ("%.17g"); NaN prints as "nan".
std::string format_double(double x);

/// Writes `iter,relerr,lambda,proj_residual`, one line per iteration.
void write_history_csv(const std::filesystem::path& path, const ReconRecord& rec);

/// 16-bit binary PGM (P5, maxval 65535). The image is an n x n column-major
/// vector; the file is row-major with row 0 at the top. Values are mapped
/// linearly from [lo, hi] onto [0, 65535] and clipped.
void write_pgm16(const std::filesystem::path& path, const Vector& image, Index n, double lo = 0.0,
                 double hi = 1.0);

struct PgmImage {
  Index width = 0;
  Index height = 0;
  int maxval = 0;
  /// Column-major, raw sample values.
  Vector pixels;
};
PgmImage read_pgm(const std::filesystem::path& path);

/// One row per angle, nrays comma-separated values per row.
void write_sinogram_csv(const std::filesystem::path& path, const Vector& sinogram,
                        const CTGeometry& geom);

void write_text(const std::filesystem::path& path, const std::string& contents);
std::string read_text(const std::filesystem::path& path);

}  // namespace igenkrylov::io
