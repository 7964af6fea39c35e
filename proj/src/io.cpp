#include "uavland/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace uavland {

namespace {

void fail_open(const std::string& path) {
  throw Error("io", "cannot open " + path);
}

}  // namespace

void write_pfm(const std::string& path, const DepthMap& d) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail_open(path);
  f << "Pf\n" << d.width << " " << d.height << "\n-1.0\n";
  // PFM stores rows bottom to top.
  for (int y = d.height - 1; y >= 0; --y) {
    f.write(reinterpret_cast<const char*>(&d.data[static_cast<size_t>(y) * d.width]),
            static_cast<std::streamsize>(sizeof(float) * d.width));
  }
}

DepthMap read_pfm(const std::string& path, float d_min, float d_max) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail_open(path);
  std::string magic;
  int w = 0, h = 0;
  double scale = 0.0;
  f >> magic >> w >> h >> scale;
  if (magic != "Pf" || w <= 0 || h <= 0) {
    throw Error("io", "not a grayscale PFM: " + path);
  }
  if (scale >= 0.0) {
    throw Error("io", "big-endian PFM unsupported: " + path);
  }
  f.get();  // single whitespace after the header
  DepthMap d(w, h, d_min, d_max);
  for (int y = h - 1; y >= 0; --y) {
    f.read(reinterpret_cast<char*>(&d.data[static_cast<size_t>(y) * w]),
           static_cast<std::streamsize>(sizeof(float) * w));
  }
  if (!f) throw Error("io", "truncated PFM: " + path);
  return d;
}

void write_depth_raw(const std::string& path, const DepthMap& d) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail_open(path);
  char header[128];
  std::snprintf(header, sizeof(header), "%d %d %.9g %.9g\n", d.width, d.height,
                static_cast<double>(d.d_min), static_cast<double>(d.d_max));
  f << header;
  f.write(reinterpret_cast<const char*>(d.data.data()),
          static_cast<std::streamsize>(sizeof(float) * d.data.size()));
}

DepthMap read_depth_raw(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail_open(path);
  std::string line;
  std::getline(f, line);
  std::istringstream hs(line);
  int w = 0, h = 0;
  float dmin = 0.0f, dmax = 0.0f;
  if (!(hs >> w >> h >> dmin >> dmax) || w <= 0 || h <= 0 || !(dmin < dmax)) {
    throw Error("io", "bad depth raster header in " + path);
  }
  DepthMap d(w, h, dmin, dmax);
  f.read(reinterpret_cast<char*>(d.data.data()),
         static_cast<std::streamsize>(sizeof(float) * d.data.size()));
  if (!f) throw Error("io", "truncated depth raster: " + path);
  return d;
}

DepthMap read_depth_auto(const std::string& path, float d_min, float d_max) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".pfm") == 0) {
    return read_pfm(path, d_min, d_max);
  }
  return read_depth_raw(path);
}

std::vector<TimedPose> read_pose_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail_open(path);
  std::vector<TimedPose> out;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    TimedPose tp;
    double qw, qx, qy, qz;
    if (!(ls >> tp.timestamp_s >> tp.pose.translation.x() >> tp.pose.translation.y() >>
          tp.pose.translation.z() >> qw >> qx >> qy >> qz)) {
      throw Error("io", "bad pose row: " + line);
    }
    tp.pose.rotation = Eigen::Quaterniond(qw, qx, qy, qz).normalized();
    out.push_back(tp);
  }
  return out;
}

void write_pose_csv(const std::string& path, const std::vector<TimedPose>& poses) {
  std::ofstream f(path);
  if (!f) fail_open(path);
  f << "# timestamp_s, tx, ty, tz, qw, qx, qy, qz\n";
  char row[256];
  for (const TimedPose& tp : poses) {
    const Eigen::Quaterniond& q = tp.pose.rotation;
    std::snprintf(row, sizeof(row), "%.6f, %.9g, %.9g, %.9g, %.9g, %.9g, %.9g, %.9g\n",
                  tp.timestamp_s, tp.pose.translation.x(), tp.pose.translation.y(),
                  tp.pose.translation.z(), q.w(), q.x(), q.y(), q.z());
    f << row;
  }
}

void write_costmap_pgm(const std::string& path, const Costmap& m) {
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (size_t i = 0; i < m.data.size(); ++i) {
    if (!m.mask[i]) continue;
    lo = std::min(lo, m.data[i]);
    hi = std::max(hi, m.data[i]);
  }
  const bool degenerate = !(hi > lo);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail_open(path);
  f << "P5\n" << m.width << " " << m.height << "\n255\n";
  std::vector<uint8_t> row(static_cast<size_t>(m.width));
  for (int y = 0; y < m.height; ++y) {
    for (int x = 0; x < m.width; ++x) {
      const size_t i = static_cast<size_t>(y) * m.width + x;
      uint8_t v = 0;
      if (m.mask[i]) {
        v = degenerate ? 255
                       : static_cast<uint8_t>(std::lround((m.data[i] - lo) / (hi - lo) * 255.0f));
      }
      row[static_cast<size_t>(x)] = v;
    }
    f.write(reinterpret_cast<const char*>(row.data()), m.width);
  }
}

void write_costmap_raw(const std::string& path, const Costmap& m) {
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  std::vector<float> buf(m.data.size(), std::numeric_limits<float>::quiet_NaN());
  for (size_t i = 0; i < m.data.size(); ++i) {
    if (!m.mask[i]) continue;
    buf[i] = m.data[i];
    lo = std::min(lo, m.data[i]);
    hi = std::max(hi, m.data[i]);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) fail_open(path);
  char header[128];
  std::snprintf(header, sizeof(header), "%d %d %.9g %.9g\n", m.width, m.height,
                static_cast<double>(lo), static_cast<double>(hi));
  f << header;
  f.write(reinterpret_cast<const char*>(buf.data()),
          static_cast<std::streamsize>(sizeof(float) * buf.size()));
}

}  // namespace uavland
