#include "hcox/library.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "hcox/diagrams.hpp"

namespace hcox {

KeySet::KeySet(const std::vector<std::uint64_t>& keys) {
  for (auto k : keys) insert(k);
}

void KeySet::grow() {
  std::vector<std::uint64_t> old = std::move(slots_);
  slots_.assign(old.empty() ? 64 : old.size() * 2, kEmpty);
  mask_ = slots_.size() - 1;
  size_ = 0;
  for (auto k : old)
    if (k != kEmpty) insert(k);
}

void KeySet::insert(std::uint64_t key) {
  if ((size_ + 1) * 2 > slots_.size()) grow();
  for (std::size_t i = hash(key) & mask_;; i = (i + 1) & mask_) {
    if (slots_[i] == key) return;
    if (slots_[i] == kEmpty) {
      slots_[i] = key;
      ++size_;
      return;
    }
  }
}

std::string to_string(LibraryClass c) {
  switch (c) {
    case LibraryClass::Elliptic: return "elliptic";
    case LibraryClass::Parabolic: return "parabolic";
    case LibraryClass::ConnectedParabolic: return "connected-parabolic";
    case LibraryClass::LannerOrQuasi: return "lanner";
    case LibraryClass::SimplexVertex: return "simplex-vertex";
    case LibraryClass::PrismVertex: return "prism-vertex";
    case LibraryClass::CubeVertex: return "cube-vertex";
    case LibraryClass::Nonnegative: return "nonnegative";
  }
  return "?";
}

VectorLibrary::VectorLibrary(std::string name, int nodes, std::vector<std::uint64_t> keys)
    : name_(std::move(name)), nodes_(nodes), keys_(std::move(keys)) {
  std::sort(keys_.begin(), keys_.end());
  keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());
  set_ = KeySet(keys_);
}

std::vector<CoxeterVector> VectorLibrary::vectors() const {
  std::vector<CoxeterVector> out;
  out.reserve(keys_.size());
  for (auto k : keys_) out.push_back(CoxeterVector::from_key(nodes_, k));
  return out;
}

namespace {

struct Layer {
  std::vector<std::uint64_t> nonnegative;  // keys on k nodes
  std::vector<std::uint64_t> hyperbolic;   // connected bordered candidates that are not nonnegative
  KeySet set;
};

// Extends every nonnegative diagram on k-1 nodes by one node such that all
// proper sub-diagrams containing the new node are nonnegative.
class Extender {
 public:
  Extender(const std::vector<Layer>& layers, int k, const std::vector<Weight>& weights)
      : layers_(layers), k_(k), weights_(weights) {
    // checks_[j]: node subsets S of {0..j-1}, |S| <= k-3, to test with {j, new}
    checks_.resize(k - 1);
    for (int j = 0; j < k - 1; ++j)
      for (unsigned s = 0; s < (1u << j); ++s)
        if (__builtin_popcount(s) + 2 <= k - 1 && __builtin_popcount(s) >= 1) checks_[j].push_back(s);
  }

  void run(std::size_t begin, std::size_t end, Layer& out) {
    const auto& bases = layers_[k_ - 1].nonnegative;
    for (std::size_t b = begin; b < end; ++b) {
      const CoxeterVector base = CoxeterVector::from_key(k_ - 1, bases[b]);
      cur_ = CoxeterVector(k_);
      for (int i = 0; i < k_ - 1; ++i)
        for (int j = i + 1; j < k_ - 1; ++j) cur_.set(i, j, base(i, j));
      dfs(0, out);
    }
  }

 private:
  void dfs(int j, Layer& out) {
    if (j == k_ - 1) {
      if (is_nonnegative(cur_))
        out.nonnegative.push_back(cur_.key());
      else if (cur_.connected())
        out.hyperbolic.push_back(cur_.key());
      return;
    }
    const int fresh = k_ - 1;
    for (Weight w : weights_) {
      cur_.set(j, fresh, w);
      bool ok = true;
      for (unsigned s : checks_[j]) {
        int nodes[kMaxNodes], m = 0;
        for (int i = 0; i < j; ++i)
          if (s & (1u << i)) nodes[m++] = i;
        nodes[m++] = j;
        nodes[m++] = fresh;
        const CoxeterVector sub = cur_.restrict(std::span<const int>(nodes, m));
        if (!layers_[m].set.contains(sub.key())) {
          ok = false;
          break;
        }
      }
      if (ok) dfs(j + 1, out);
    }
    cur_.set(j, fresh, kRightAngle);
  }

  const std::vector<Layer>& layers_;
  int k_;
  const std::vector<Weight>& weights_;
  std::vector<std::vector<unsigned>> checks_;
  CoxeterVector cur_;
};

std::vector<Layer> build_layers(int n, const LibraryOptions& opt) {
  if (opt.weight_cap < 2 || opt.weight_cap > 14) throw std::invalid_argument("weight_cap must lie in 2..14");
  std::vector<Weight> weights;
  if (opt.allow_parallel) weights.push_back(kParallel);
  for (int w = 2; w <= opt.weight_cap; ++w) weights.push_back(Weight(w));

  std::vector<Layer> layers(n + 1);
  layers[1].nonnegative = {0};
  layers[1].set = KeySet(layers[1].nonnegative);
  for (Weight w : weights) layers[2].nonnegative.push_back(CoxeterVector(2, {int(w)}).key());
  layers[2].set = KeySet(layers[2].nonnegative);
  for (int k = 3; k <= n; ++k) {
    const std::size_t total = layers[k - 1].nonnegative.size();
    const int threads = std::max(1, std::min<int>(opt.threads, int(total / 64) + 1));
    std::vector<Layer> parts(threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      auto work = [&, t] {
        Extender ext(layers, k, weights);
        ext.run(total * t / threads, total * (t + 1) / threads, parts[t]);
      };
      if (threads == 1)
        work();
      else
        pool.emplace_back(work);
    }
    for (auto& th : pool) th.join();
    for (auto& p : parts) {
      layers[k].nonnegative.insert(layers[k].nonnegative.end(), p.nonnegative.begin(), p.nonnegative.end());
      layers[k].hyperbolic.insert(layers[k].hyperbolic.end(), p.hyperbolic.begin(), p.hyperbolic.end());
    }
    std::sort(layers[k].nonnegative.begin(), layers[k].nonnegative.end());
    std::sort(layers[k].hyperbolic.begin(), layers[k].hyperbolic.end());
    layers[k].set = KeySet(layers[k].nonnegative);
  }
  return layers;
}

template <class Pred>
std::vector<std::uint64_t> select(const std::vector<std::uint64_t>& keys, int n, Pred pred) {
  std::vector<std::uint64_t> out;
  for (auto k : keys)
    if (pred(CoxeterVector::from_key(n, k))) out.push_back(k);
  return out;
}

std::vector<std::uint64_t> select_class(const std::vector<Layer>& layers, int n, LibraryClass cls) {
  const auto& nn = layers[n].nonnegative;
  switch (cls) {
    case LibraryClass::Nonnegative: return nn;
    case LibraryClass::Elliptic:
      return select(nn, n, [](const CoxeterVector& v) { return classify(v) == DiagramClass::Elliptic; });
    case LibraryClass::Parabolic:
      return select(nn, n, [](const CoxeterVector& v) { return classify(v) == DiagramClass::Parabolic; });
    case LibraryClass::ConnectedParabolic: return select(nn, n, is_connected_parabolic);
    case LibraryClass::SimplexVertex:
      return select(nn, n, [](const CoxeterVector& v) {
        return classify(v) == DiagramClass::Elliptic || is_connected_parabolic(v);
      });
    case LibraryClass::LannerOrQuasi:
      return select(layers[n].hyperbolic, n, [](const CoxeterVector& v) {
        const DiagramClass c = classify(v);
        return c == DiagramClass::Lanner || c == DiagramClass::QuasiLanner;
      });
    default: break;
  }
  throw std::invalid_argument("class needs a dedicated builder");
}

std::vector<std::uint64_t> prism_vertex_keys(const std::vector<std::uint64_t>& triangles) {
  std::vector<std::uint64_t> out;
  for (auto t : triangles) {
    const CoxeterVector tri = CoxeterVector::from_key(3, t);
    CoxeterVector v(5);
    v.set(0, 1, kParallel);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) v.set(2 + a, 2 + b, tri(a, b));
    out.push_back(v.key());
  }
  return out;
}

std::uint64_t cube_vertex_key() {
  CoxeterVector v(6);
  v.set(0, 1, kParallel);
  v.set(2, 3, kParallel);
  v.set(4, 5, kParallel);
  return v.key();
}

std::string default_name(int n, LibraryClass cls) {
  switch (cls) {
    case LibraryClass::Elliptic: return "S" + std::to_string(n);
    case LibraryClass::Parabolic: return "E" + std::to_string(n);
    case LibraryClass::LannerOrQuasi: return "L" + std::to_string(n);
    case LibraryClass::SimplexVertex:
    case LibraryClass::PrismVertex:
    case LibraryClass::CubeVertex: return "PB" + std::to_string(n);
    default: return to_string(cls) + std::to_string(n);
  }
}

}  // namespace

VectorLibrary generate_library(int n, LibraryClass cls, const LibraryOptions& opt) {
  if (n < 2 || n > 6) throw std::invalid_argument("library node count must lie in 2..6");
  if (cls == LibraryClass::SimplexVertex && n != 4) throw std::invalid_argument("simplex vertex library has 4 nodes");
  if (cls == LibraryClass::PrismVertex) {
    if (n != 5) throw std::invalid_argument("prism vertex library has 5 nodes");
    const auto layers = build_layers(3, opt);
    return VectorLibrary("PB5", 5, prism_vertex_keys(select_class(layers, 3, LibraryClass::ConnectedParabolic)));
  }
  if (cls == LibraryClass::CubeVertex) {
    if (n != 6) throw std::invalid_argument("cube vertex library has 6 nodes");
    return VectorLibrary("PB6", 6, {cube_vertex_key()});
  }
  const auto layers = build_layers(n, opt);
  return VectorLibrary(default_name(n, cls), n, select_class(layers, n, cls));
}

const VectorLibrary& LibrarySet::spherical(int n) const {
  switch (n) {
    case 3: return s3;
    case 4: return s4;
    case 5: return s5;
    case 6: return s6;
  }
  throw std::out_of_range("no spherical library for this size");
}

const VectorLibrary& LibrarySet::euclidean(int n) const {
  switch (n) {
    case 3: return e3;
    case 4: return e4;
    case 5: return e5;
    case 6: return e6;
  }
  throw std::out_of_range("no euclidean library for this size");
}

const VectorLibrary& LibrarySet::lanner(int n) const {
  if (n == 3) return l3;
  if (n == 4) return l4;
  throw std::out_of_range("no lanner library for this size");
}

std::vector<const VectorLibrary*> LibrarySet::all() const {
  return {&s3, &s4, &s5, &s6, &e3, &e4, &e5, &e6, &l3, &l4, &pb4, &pb5, &pb6};
}

namespace {

constexpr char kMagic[8] = {'H', 'C', 'O', 'X', 'L', 'I', 'B', '1'};

}  // namespace

void save_library(const VectorLibrary& lib, const std::filesystem::path& file, int weight_cap) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out.write(kMagic, sizeof kMagic);
  const std::int32_t header[3] = {lib.nodes(), weight_cap, std::int32_t(lib.name().size())};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(lib.name().data(), std::streamsize(lib.name().size()));
  const std::uint64_t count = lib.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(lib.keys().data()), std::streamsize(count * sizeof(std::uint64_t)));
}

std::optional<VectorLibrary> load_library(const std::filesystem::path& file, int weight_cap) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  std::int32_t header[3];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(header), sizeof header) || header[1] != weight_cap) return std::nullopt;
  std::string name(std::size_t(header[2]), '\0');
  std::uint64_t count = 0;
  if (!in.read(name.data(), header[2]) || !in.read(reinterpret_cast<char*>(&count), sizeof count)) return std::nullopt;
  std::vector<std::uint64_t> keys(count);
  if (!in.read(reinterpret_cast<char*>(keys.data()), std::streamsize(count * sizeof(std::uint64_t)))) return std::nullopt;
  return VectorLibrary(name, header[0], std::move(keys));
}

LibrarySet build_libraries(const LibraryOptions& opt, const std::optional<std::filesystem::path>& cache_dir) {
  LibrarySet set;
  set.weight_cap = opt.weight_cap;
  struct Slot {
    VectorLibrary* lib;
    int n;
    LibraryClass cls;
  };
  const std::array<Slot, 13> slots = {{
      {&set.s3, 3, LibraryClass::Elliptic},
      {&set.s4, 4, LibraryClass::Elliptic},
      {&set.s5, 5, LibraryClass::Elliptic},
      {&set.s6, 6, LibraryClass::Elliptic},
      {&set.e3, 3, LibraryClass::Parabolic},
      {&set.e4, 4, LibraryClass::Parabolic},
      {&set.e5, 5, LibraryClass::Parabolic},
      {&set.e6, 6, LibraryClass::Parabolic},
      {&set.l3, 3, LibraryClass::LannerOrQuasi},
      {&set.l4, 4, LibraryClass::LannerOrQuasi},
      {&set.pb4, 4, LibraryClass::SimplexVertex},
      {&set.pb5, 5, LibraryClass::PrismVertex},
      {&set.pb6, 6, LibraryClass::CubeVertex},
  }};
  auto file_for = [&](const Slot& s) {
    return *cache_dir / (default_name(s.n, s.cls) + "_w" + std::to_string(opt.weight_cap) + "_" + to_string(s.cls) +
                         (opt.allow_parallel ? "" : "_noparallel") + ".bin");
  };
  if (cache_dir) {
    bool complete = true;
    for (const auto& s : slots) {
      auto lib = load_library(file_for(s), opt.weight_cap);
      if (!lib) {
        complete = false;
        break;
      }
      *s.lib = std::move(*lib);
    }
    if (complete) return set;
  }
  const auto layers = build_layers(6, opt);
  for (const auto& s : slots) {
    std::vector<std::uint64_t> keys;
    if (s.cls == LibraryClass::PrismVertex)
      keys = prism_vertex_keys(select_class(layers, 3, LibraryClass::ConnectedParabolic));
    else if (s.cls == LibraryClass::CubeVertex)
      keys = {cube_vertex_key()};
    else
      keys = select_class(layers, s.n, s.cls);
    *s.lib = VectorLibrary(default_name(s.n, s.cls), s.n, std::move(keys));
  }
  if (cache_dir) {
    std::filesystem::create_directories(*cache_dir);
    for (const auto& s : slots) save_library(*s.lib, file_for(s), opt.weight_cap);
  }
  return set;
}

}  // namespace hcox
