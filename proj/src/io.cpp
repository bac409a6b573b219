#include "igenkrylov/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "igenkrylov/errors.hpp"

namespace igenkrylov::io {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  while (true) {
    int c = in.peek();
    if (c == EOF) break;
    if (c == '#') {
      std::string line;
      std::getline(in, line);
      continue;
    }
    if (std::isspace(c)) {
      in.get();
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(in.get()));
  }
  return tok;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_history_csv(const std::filesystem::path& path, const ReconRecord& rec) {
  auto out = open_out(path);
  out << "iter,relerr,lambda,proj_residual\n";
  for (int i = 0; i < rec.iterations(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    const double e = u < rec.relerr.size() ? rec.relerr[u] : std::nan("");
    out << (i + 1) << ',' << format_double(e) << ',' << format_double(rec.lambda[u]) << ','
        << format_double(rec.proj_residual[u]) << '\n';
  }
}

void write_pgm16(const std::filesystem::path& path, const Vector& image, Index n, double lo,
                 double hi) {
  if (n < 1 || image.size() != n * n) throw DimensionError("write_pgm16: image is not n x n");
  if (!(hi > lo)) throw InvalidParameterError("write_pgm16: empty intensity window");
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out << "P5\n" << n << ' ' << n << "\n65535\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(2 * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double v = image[i + j * n];
      const double t = std::isfinite(v) ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.0;
      const auto q = static_cast<std::uint16_t>(std::lround(t * 65535.0));
      row[static_cast<std::size_t>(2 * j)] = static_cast<unsigned char>(q >> 8);
      row[static_cast<std::size_t>(2 * j + 1)] = static_cast<unsigned char>(q & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
}

PgmImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  if (header_token(in) != "P5") throw InvalidInputError("not a binary PGM file");
  PgmImage img;
  try {
    img.width = std::stol(header_token(in));
    img.height = std::stol(header_token(in));
    img.maxval = std::stoi(header_token(in));
  } catch (const std::exception&) {
    throw InvalidInputError("malformed PGM header");
  }
  if (img.width < 1 || img.height < 1 || img.maxval < 1 || img.maxval > 65535) {
    throw InvalidInputError("unsupported PGM dimensions or maxval");
  }
  const int bytes = img.maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(static_cast<std::size_t>(img.width * img.height * bytes));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw InvalidInputError("truncated PGM data");
  }
  img.pixels.resize(img.width * img.height);
  for (Index i = 0; i < img.height; ++i) {
    for (Index j = 0; j < img.width; ++j) {
      const auto p = static_cast<std::size_t>((i * img.width + j) * bytes);
      const double v = bytes == 2 ? (raw[p] << 8) | raw[p + 1] : raw[p];
      img.pixels[i + j * img.height] = v;
    }
  }
  return img;
}

void write_sinogram_csv(const std::filesystem::path& path, const Vector& sinogram,
                        const CTGeometry& geom) {
  if (sinogram.size() != geom.rows()) throw DimensionError("write_sinogram_csv: length mismatch");
  auto out = open_out(path);
  for (std::size_t a = 0; a < geom.angles_deg.size(); ++a) {
    for (Index r = 0; r < geom.nrays; ++r) {
      if (r) out << ',';
      out << format_double(sinogram[static_cast<Index>(a) * geom.nrays + r]);
    }
    out << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  auto out = open_out(path);
  out << contents;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace igenkrylov::io
