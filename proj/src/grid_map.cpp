#include "fgnav/grid_map.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fgnav {

namespace {

struct PgmImage {
  int width = 0;
  int height = 0;
  int max_value = 255;
  std::vector<std::uint8_t> pixels;  // row 0 = top
};

PgmImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open PGM file: " + path);
  }
  std::string magic;
  in >> magic;
  if (magic != "P5") {
    throw std::runtime_error("unsupported PGM magic '" + magic + "' in " +
                             path);
  }
  auto next_token = [&in]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw std::runtime_error("truncated PGM header");
  };
  PgmImage img;
  img.width = std::stoi(next_token());
  img.height = std::stoi(next_token());
  img.max_value = std::stoi(next_token());
  if (img.max_value > 255) {
    throw std::runtime_error("16-bit PGM not supported");
  }
  in.get();  // single whitespace after maxval
  img.pixels.resize(static_cast<size_t>(img.width) * img.height);
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (!in) {
    throw std::runtime_error("truncated PGM payload in " + path);
  }
  return img;
}

}  // namespace

GridMap load_map(const std::string& yaml_path) {
  YAML::Node doc = YAML::LoadFile(yaml_path);
  const auto image = doc["image"].as<std::string>();
  const double resolution = doc["resolution"].as<double>();
  const auto origin = doc["origin"].as<std::vector<double>>();
  const double occupied_thresh =
      doc["occupied_thresh"] ? doc["occupied_thresh"].as<double>() : 0.65;
  const double free_thresh =
      doc["free_thresh"] ? doc["free_thresh"].as<double>() : 0.196;
  const bool negate = doc["negate"] ? doc["negate"].as<int>() != 0 : false;
  if (origin.size() < 3) {
    throw std::runtime_error("map origin must be [x, y, theta]");
  }

  std::filesystem::path image_path(image);
  if (image_path.is_relative()) {
    image_path = std::filesystem::path(yaml_path).parent_path() / image_path;
  }
  const PgmImage img = load_pgm(image_path.string());

  GridMap map = GridMap::make(img.width, img.height, resolution,
                              {origin[0], origin[1], origin[2]});
  for (int cy = 0; cy < map.height; ++cy) {
    const int img_row = map.height - 1 - cy;  // image row 0 is the top
    for (int cx = 0; cx < map.width; ++cx) {
      const double pixel =
          img.pixels[static_cast<size_t>(img_row) * img.width + cx] /
          static_cast<double>(img.max_value);
      const double occ = negate ? pixel : 1.0 - pixel;
      CellState s = CellState::Unknown;
      if (occ > occupied_thresh) {
        s = CellState::Occupied;
      } else if (occ < free_thresh) {
        s = CellState::Free;
      }
      map.set(cx, cy, s);
    }
  }
  return map;
}

void save_map(const GridMap& map, const std::string& yaml_path,
              const std::string& pgm_path) {
  {
    std::ofstream out(pgm_path, std::ios::binary);
    if (!out) {
      throw std::runtime_error("cannot write PGM file: " + pgm_path);
    }
    out << "P5\n" << map.width << " " << map.height << "\n255\n";
    std::vector<std::uint8_t> row(map.width);
    for (int img_row = 0; img_row < map.height; ++img_row) {
      const int cy = map.height - 1 - img_row;
      for (int cx = 0; cx < map.width; ++cx) {
        switch (map.at(cx, cy)) {
          case CellState::Free:
            row[cx] = 254;
            break;
          case CellState::Occupied:
            row[cx] = 0;
            break;
          case CellState::Unknown:
            row[cx] = 205;
            break;
        }
      }
      out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
  }
  std::ofstream out(yaml_path);
  if (!out) {
    throw std::runtime_error("cannot write YAML file: " + yaml_path);
  }
  out << "image: " << std::filesystem::path(pgm_path).filename().string()
      << "\n";
  out << "resolution: " << map.resolution << "\n";
  out << "origin: [" << map.origin.x << ", " << map.origin.y << ", "
      << map.origin.theta << "]\n";
  out << "occupied_thresh: 0.65\n";
  out << "free_thresh: 0.196\n";
  out << "negate: 0\n";
}

}  // namespace fgnav
