#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hcox/coxeter_vector.hpp"

namespace hcox {

// Open-addressing set of 64-bit vector keys.
class KeySet {
 public:
  KeySet() = default;
  explicit KeySet(const std::vector<std::uint64_t>& keys);
  void insert(std::uint64_t key);
  bool contains(std::uint64_t key) const {
    if (slots_.empty()) return false;
    for (std::size_t i = hash(key) & mask_;; i = (i + 1) & mask_) {
      if (slots_[i] == key) return true;
      if (slots_[i] == kEmpty) return false;
    }
  }
  std::size_t size() const { return size_; }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t(0);
  static std::size_t hash(std::uint64_t k) {
    k ^= k >> 31;
    k *= 0x7fb5d329728ea185ULL;
    k ^= k >> 27;
    return std::size_t(k);
  }
  void grow();
  std::vector<std::uint64_t> slots_;
  std::size_t mask_ = 0, size_ = 0;
};

enum class LibraryClass {
  Elliptic,            // S_n
  Parabolic,           // E_n
  ConnectedParabolic,  // connected members of E_n
  LannerOrQuasi,       // L_n
  SimplexVertex,       // PB4: elliptic or connected parabolic on 4 nodes
  PrismVertex,         // PB5: nodes {0,1} parallel, triangle {2,3,4} connected parabolic
  CubeVertex,          // PB6: pairs {0,1}, {2,3}, {4,5} parallel
  Nonnegative          // every component elliptic or connected parabolic
};

std::string to_string(LibraryClass c);

// All labeled vectors on a fixed node count in one class.
class VectorLibrary {
 public:
  VectorLibrary() = default;
  VectorLibrary(std::string name, int nodes, std::vector<std::uint64_t> keys);

  const std::string& name() const { return name_; }
  int nodes() const { return nodes_; }
  std::size_t size() const { return keys_.size(); }
  bool contains(const CoxeterVector& v) const { return v.nodes() == nodes_ && set_.contains(v.key()); }
  bool contains_key(std::uint64_t key) const { return set_.contains(key); }
  // Sorted ascending by key (lexicographic order of entries).
  const std::vector<std::uint64_t>& keys() const { return keys_; }
  std::vector<CoxeterVector> vectors() const;

 private:
  std::string name_;
  int nodes_ = 0;
  std::vector<std::uint64_t> keys_;
  KeySet set_;
};

struct LibraryOptions {
  int weight_cap = 7;
  // Admit entry 0 (parallel pair) during enumeration.
  bool allow_parallel = true;
  int threads = 1;
};

// Exhaustive enumeration on n labeled nodes (2 <= n <= 6) of the given class.
VectorLibrary generate_library(int n, LibraryClass cls, const LibraryOptions& opt = {});

// The reference libraries used by the pasting engine.
struct LibrarySet {
  int weight_cap = 7;
  VectorLibrary s3, s4, s5, s6;
  VectorLibrary e3, e4, e5, e6;
  VectorLibrary l3, l4;
  VectorLibrary pb4, pb5, pb6;

  const VectorLibrary& spherical(int n) const;
  const VectorLibrary& euclidean(int n) const;
  const VectorLibrary& lanner(int n) const;
  std::vector<const VectorLibrary*> all() const;
};

// Builds every library from one shared chain of nonnegative diagrams.
// With a cache directory, libraries are loaded from / stored to a binary file
// keyed by (n, weight_cap, class).
LibrarySet build_libraries(const LibraryOptions& opt = {},
                           const std::optional<std::filesystem::path>& cache_dir = std::nullopt);

void save_library(const VectorLibrary& lib, const std::filesystem::path& file, int weight_cap);
std::optional<VectorLibrary> load_library(const std::filesystem::path& file, int weight_cap);

}  // namespace hcox
