#include "slicekit/slice.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace slicekit {

long Image::filled_count() const {
  return static_cast<long>(std::count_if(pixels.begin(), pixels.end(), [](std::uint8_t p) { return p != 0; }));
}

std::optional<Window> auto_window(const SliceResult& result) {
  if (result.loops.empty()) return std::nullopt;
  Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
  Eigen::Vector2d hi = -lo;
  for (const auto& loop : result.loops) {
    lo = lo.cwiseMin(loop.points.colwise().minCoeff().transpose());
    hi = hi.cwiseMax(loop.points.colwise().maxCoeff().transpose());
  }
  const double side = std::max((hi - lo).maxCoeff(), 1e-12);
  const double padded = side * 1.1;
  Window w;
  w.size = padded;
  w.min = 0.5 * (lo + hi) - Eigen::Vector2d::Constant(padded / 2);
  return w;
}

Image rasterize_slice(const SliceResult& result, int resolution, std::optional<Window> window) {
  if (resolution < 16) throw std::invalid_argument("raster resolution must be at least 16");
  Image img;
  img.width = img.height = resolution;
  img.pixels.assign(static_cast<size_t>(resolution) * resolution, 0);
  if (!window) window = auto_window(result);
  if (!window || result.loops.empty()) return img;

  const double px = window->size / resolution;
  const double top = window->min.y() + window->size;
  std::vector<double> xs;
  for (int row = 0; row < resolution; ++row) {
    const double y = top - (row + 0.5) * px;
    xs.clear();
    for (const auto& loop : result.loops) {
      const auto& P = loop.points;
      const Eigen::Index n = P.rows();
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j = (i + 1) % n;
        const double y0 = P(i, 1), y1 = P(j, 1);
        if ((y0 <= y && y < y1) || (y1 <= y && y < y0)) xs.push_back(P(i, 0) + (y - y0) / (y1 - y0) * (P(j, 0) - P(i, 0)));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Pixel centres in [xs[k], xs[k+1]).
      const double c0 = std::clamp((xs[k] - window->min.x()) / px - 0.5, -1.0, resolution + 1.0);
      const double c1 = std::clamp((xs[k + 1] - window->min.x()) / px - 0.5, -1.0, resolution + 1.0);
      const int first = std::max(0, static_cast<int>(std::ceil(c0)));
      const int last = std::min(resolution - 1, static_cast<int>(std::ceil(c1)) - 1);
      for (int col = first; col <= last; ++col) img.pixels[static_cast<size_t>(row) * resolution + col] = 255;
    }
  }
  return img;
}

void write_pgm(const Image& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace slicekit
