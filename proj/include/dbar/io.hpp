#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dbar/bie.hpp"
#include "dbar/forward.hpp"
#include "dbar/reconstruct.hpp"

namespace dbar {

/// First line `N,<N>`, then header `l,n,re,im` and (2N+1)² rows.
void write_dn_csv(const std::filesystem::path& path, const DNMatrix& dn);
DNMatrix read_dn_csv(const std::filesystem::path& path);

/// `re_lambda,im_lambda,re_t,im_t,mask`, one row per grid node.
void write_scattering_csv(const std::filesystem::path& path, const ScatteringGrid& t);
/// Reads a scattering CSV written for `grid`; rows are matched to nodes.
ScatteringGrid read_scattering_csv(const std::filesystem::path& path, const PeriodicGrid& grid);

/// `x,y,value_re,value_im,valid`.
void write_reconstruction_csv(const std::filesystem::path& path, const ReconstructionResult& result);

/// Generic CSV with a header row.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct HeatmapRange {
  double min = 0.0;
  double max = 0.0;
};

/// Row-major `values` (rows × cols, row 0 at the top) as an 8-bit RGB PNG with
/// a fixed blue-white-red colormap; NaN cells are drawn grey. Returns the
/// range mapped onto the colormap (the data range unless `range` is given).
HeatmapRange write_heatmap_png(const std::filesystem::path& path, const Eigen::MatrixXd& values,
                               const HeatmapRange* range = nullptr, int scale = 1);

/// Run manifest: parameters, seeds, version, and any extra entries, as JSON.
class Manifest {
 public:
  explicit Manifest(std::string command);
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void add_output(const std::string& path, const std::string& description);
  void add_heatmap(const std::string& path, HeatmapRange range);
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::map<std::string, std::string> strings_;
  std::map<std::string, double> numbers_;
  std::map<std::string, long long> integers_;
  std::vector<std::pair<std::string, std::string>> outputs_;
  std::vector<std::pair<std::string, HeatmapRange>> heatmaps_;
};

std::string library_version();

}  // namespace dbar
