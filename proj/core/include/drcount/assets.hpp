#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "drcount/image.hpp"
#include "drcount/mesh.hpp"

namespace drcount {

/// File name of the index every asset directory carries.
inline constexpr const char* kIndexFileName = "index.json";

struct IndexEntry {
  std::string id;
  std::string file;      // relative to the library directory
  std::string category;  // may be empty
};

/// Reads `<dir>/index.json`:
///   {"assets": [{"id": "...", "file": "...", "category": "..."}, ...]}
/// Ids must be unique. Throws AssetError.
std::vector<IndexEntry> read_index(const std::filesystem::path& dir);

void write_index(const std::filesystem::path& dir, const std::vector<IndexEntry>& entries);

struct ImageAsset {
  std::string id;
  std::string category;
  Image image;
};

struct MeshAsset {
  std::string id;
  std::string category;
  Mesh mesh;
};

/// Textures or backgrounds.
struct ImageLibrary {
  std::filesystem::path root;
  std::vector<ImageAsset> items;

  std::size_t size() const { return items.size(); }
};

struct MeshLibrary {
  std::filesystem::path root;
  std::vector<MeshAsset> items;

  std::size_t size() const { return items.size(); }
};

/// Loads every entry of the index. All broken entries are collected and
/// reported together in one AssetError.
ImageLibrary load_image_library(const std::filesystem::path& dir);
MeshLibrary load_mesh_library(const std::filesystem::path& dir,
                              std::size_t face_budget = kDefaultFaceBudget);

struct AssetLibraries {
  MeshLibrary meshes;
  ImageLibrary textures;
  ImageLibrary backgrounds;
};

}  // namespace drcount
