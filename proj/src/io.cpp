#include "dbar/io.hpp"

#include <png.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dbar/errors.hpp"

namespace dbar {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << std::setprecision(17);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

void write_dn_csv(const std::filesystem::path& path, const DNMatrix& dn) {
  auto out = open_out(path);
  out << "N," << dn.n_modes << "\nl,n,re,im\n";
  for (int l = -dn.n_modes; l <= dn.n_modes; ++l)
    for (int n = -dn.n_modes; n <= dn.n_modes; ++n) {
      const cplx v = dn(l, n);
      out << l << ',' << n << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

DNMatrix read_dn_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  auto head = split(line);
  if (head.size() != 2 || head[0] != "N") throw InvalidArgument("DN CSV must start with 'N,<value>'");
  const int n = std::stoi(head[1]);
  std::getline(in, line);  // column header
  DNMatrix dn{n, Eigen::MatrixXcd::Zero(2 * n + 1, 2 * n + 1)};
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c = split(line);
    if (c.size() != 4) throw InvalidArgument("malformed DN CSV row: " + line);
    const int l = std::stoi(c[0]);
    const int m = std::stoi(c[1]);
    if (std::abs(l) > n || std::abs(m) > n) throw InvalidArgument("DN CSV index out of range");
    dn.entries(l + n, m + n) = {std::stod(c[2]), std::stod(c[3])};
    ++rows;
  }
  if (rows != (2 * n + 1) * (2 * n + 1)) throw InvalidArgument("DN CSV has the wrong number of rows");
  return dn;
}

void write_scattering_csv(const std::filesystem::path& path, const ScatteringGrid& t) {
  auto out = open_out(path);
  out << "re_lambda,im_lambda,re_t,im_t,mask\n";
  for (std::size_t p = 0; p < t.grid.size(); ++p) {
    const cplx l = t.grid.node(p);
    const cplx v = t.values(static_cast<Eigen::Index>(p));
    out << l.real() << ',' << l.imag() << ',' << v.real() << ',' << v.imag() << ',' << int(t.mask[p]) << '\n';
  }
}

ScatteringGrid read_scattering_csv(const std::filesystem::path& path, const PeriodicGrid& grid) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  ScatteringGrid t = ScatteringGrid::zero(grid);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c = split(line);
    if (c.size() != 5) throw InvalidArgument("malformed scattering CSV row: " + line);
    const cplx l{std::stod(c[0]), std::stod(c[1])};
    const std::size_t p = grid.nearest(l);
    if (std::abs(grid.node(p) - l) > 1e-6 * grid.spacing()) throw InvalidArgument("scattering CSV grid mismatch");
    t.values(static_cast<Eigen::Index>(p)) = {std::stod(c[2]), std::stod(c[3])};
    t.mask[p] = static_cast<std::uint8_t>(std::stoi(c[4]));
  }
  return t;
}

void write_reconstruction_csv(const std::filesystem::path& path, const ReconstructionResult& result) {
  auto out = open_out(path);
  out << "x,y,value_re,value_im,valid\n";
  for (std::size_t i = 0; i < result.z_nodes.size(); ++i)
    out << result.z_nodes[i].real() << ',' << result.z_nodes[i].imag() << ',' << result.values[i].real() << ','
        << result.values[i].imag() << ',' << int(result.valid[i]) << '\n';
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

HeatmapRange write_heatmap_png(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                               const HeatmapRange* range, int scale) {
  HeatmapRange r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  if (range) {
    r = *range;
  } else {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      const double v = values.data()[i];
      if (!std::isfinite(v)) continue;
      r.min = std::min(r.min, v);
      r.max = std::max(r.max, v);
    }
    if (!std::isfinite(r.min)) r = {0.0, 0.0};
  }
  const int rows = static_cast<int>(values.rows()) * scale;
  const int cols = static_cast<int>(values.cols()) * scale;
  std::vector<unsigned char> rgb(static_cast<std::size_t>(rows) * cols * 3);
  const double span = r.max > r.min ? r.max - r.min : 1.0;
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      const double v = values(y / scale, x / scale);
      unsigned char* px = &rgb[(static_cast<std::size_t>(y) * cols + x) * 3];
      if (!std::isfinite(v)) {
        px[0] = px[1] = px[2] = 160;
        continue;
      }
      // Blue (min) → white → red (max).
      const double s = std::clamp((v - r.min) / span, 0.0, 1.0);
      const double lo = std::min(1.0, 2.0 * s);
      const double hi = std::min(1.0, 2.0 * (1.0 - s));
      px[0] = static_cast<unsigned char>(std::lround(255.0 * lo));
      px[1] = static_cast<unsigned char>(std::lround(255.0 * std::min(lo, hi)));
      px[2] = static_cast<unsigned char>(std::lround(255.0 * hi));
    }

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) throw InvalidArgument("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (!png || !info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw NumericalFailure("libpng failed writing " + path.string());
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(cols), static_cast<png_uint_32>(rows), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < rows; ++y) png_write_row(png, &rgb[static_cast<std::size_t>(y) * cols * 3]);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
  return r;
}

std::string library_version() { return DBAR_VERSION; }

Manifest::Manifest(std::string command) : command_(std::move(command)) {}

void Manifest::set(const std::string& key, const std::string& value) { strings_[key] = value; }
void Manifest::set(const std::string& key, double value) { numbers_[key] = value; }
void Manifest::set(const std::string& key, long long value) { integers_[key] = value; }

void Manifest::add_output(const std::string& path, const std::string& description) {
  outputs_.emplace_back(path, description);
}

void Manifest::add_heatmap(const std::string& path, HeatmapRange range) { heatmaps_.emplace_back(path, range); }

void Manifest::write(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["command"] = command_;
  j["version"] = library_version();
  j["created_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
  auto& params = j["parameters"];
  params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : strings_) params[k] = v;
  for (const auto& [k, v] : numbers_) params[k] = v;
  for (const auto& [k, v] : integers_) params[k] = v;
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& [p, d] : outputs_) j["outputs"].push_back({{"path", p}, {"description", d}});
  j["heatmaps"] = nlohmann::ordered_json::array();
  for (const auto& [p, r] : heatmaps_)
    j["heatmaps"].push_back({{"path", p}, {"colormap", "blue-white-red"}, {"min", r.min}, {"max", r.max}});
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace dbar
