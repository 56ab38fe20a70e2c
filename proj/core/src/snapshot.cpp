#include "fradi/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fradi {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot io assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("snapshot: truncated file");
  return v;
}

void put_mat(std::ostream& os, const Mat& m) {
  os.write(reinterpret_cast<const char*>(m.data()),
           static_cast<std::streamsize>(m.size() * sizeof(double)));
}

Mat get_mat(std::istream& is, int rows, int cols) {
  Mat m(rows, cols);
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(m.size() * sizeof(double)));
  if (!is) throw std::runtime_error("snapshot: truncated tile payload");
  return m;
}

struct Header {
  uint8_t kind = 0;
  uint8_t symmetric = 1;
  uint32_t dim = 1;
  uint64_t N = 0;
  uint32_t m = 0, nb = 0;
  double eps = 0;
  uint64_t seed = 0;
  uint64_t tiles = 0;
};

void write_header(std::ostream& os, const Header& h) {
  os.write("TLR1", 4);
  put<uint8_t>(os, h.kind);
  put<uint8_t>(os, h.symmetric);
  put<uint16_t>(os, 0);
  put<uint32_t>(os, h.dim);
  put<uint64_t>(os, h.N);
  put<uint32_t>(os, h.m);
  put<uint32_t>(os, h.nb);
  put<double>(os, h.eps);
  put<uint64_t>(os, h.seed);
  put<uint64_t>(os, h.tiles);
}

Header read_header(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "TLR1", 4) != 0)
    throw std::runtime_error("snapshot: bad magic");
  Header h;
  h.kind = get<uint8_t>(is);
  h.symmetric = get<uint8_t>(is);
  get<uint16_t>(is);
  h.dim = get<uint32_t>(is);
  h.N = get<uint64_t>(is);
  h.m = get<uint32_t>(is);
  h.nb = get<uint32_t>(is);
  h.eps = get<double>(is);
  h.seed = get<uint64_t>(is);
  h.tiles = get<uint64_t>(is);
  return h;
}

void write_tile(std::ostream& os, uint32_t i, uint32_t j, const Mat& dense) {
  put<uint32_t>(os, i);
  put<uint32_t>(os, j);
  put<uint8_t>(os, 1);  // dense
  put<uint8_t>(os, 0);
  put<uint8_t>(os, 0);
  put<uint8_t>(os, 0);
  put<uint32_t>(os, 0);
  put<uint32_t>(os, static_cast<uint32_t>(dense.rows));
  put<uint32_t>(os, static_cast<uint32_t>(dense.cols));
  put_mat(os, dense);
}

void write_tile(std::ostream& os, uint32_t i, uint32_t j, const LowRankTile& lr) {
  put<uint32_t>(os, i);
  put<uint32_t>(os, j);
  put<uint8_t>(os, 0);  // low rank
  put<uint8_t>(os, 0);
  put<uint8_t>(os, 0);
  put<uint8_t>(os, 0);
  put<uint32_t>(os, static_cast<uint32_t>(lr.rank()));
  put<uint32_t>(os, static_cast<uint32_t>(lr.U.rows));
  put<uint32_t>(os, static_cast<uint32_t>(lr.V.rows));
  put_mat(os, lr.U);
  put_mat(os, lr.V);
}

struct TileRecord {
  int i, j;
  OffTile tile;
};

TileRecord read_tile(std::istream& is) {
  TileRecord r;
  r.i = static_cast<int>(get<uint32_t>(is));
  r.j = static_cast<int>(get<uint32_t>(is));
  uint8_t kind = get<uint8_t>(is);
  get<uint8_t>(is);
  get<uint8_t>(is);
  get<uint8_t>(is);
  int k = static_cast<int>(get<uint32_t>(is));
  int rows = static_cast<int>(get<uint32_t>(is));
  int cols = static_cast<int>(get<uint32_t>(is));
  if (kind == 1) {
    r.tile.kind = TileKind::dense;
    r.tile.dense = get_mat(is, rows, cols);
  } else {
    r.tile.kind = TileKind::lowrank;
    r.tile.lr.U = get_mat(is, rows, k);
    r.tile.lr.V = get_mat(is, cols, k);
  }
  return r;
}

TilePartition uniform_partition(int n, int m, int nb) {
  TilePartition p;
  p.m = m;
  p.nb = nb;
  p.perm.resize(n);
  p.inv_perm.resize(n);
  for (int i = 0; i < n; i++) p.perm[i] = p.inv_perm[i] = i;
  for (int t = 0; t < nb; t++)
    p.tile_range.emplace_back(t * m, std::min(n, (t + 1) * m));
  p.tile_box.resize(nb);
  return p;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("snapshot: cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot: cannot open for reading: " + path);
  return is;
}

}  // namespace

void write_snapshot(const std::string& path, const TLRMatrix& A) {
  auto os = open_out(path);
  Header h;
  h.kind = 0;
  h.symmetric = A.symmetric ? 1 : 0;
  h.dim = static_cast<uint32_t>(A.dim);
  h.N = static_cast<uint64_t>(A.n);
  h.m = static_cast<uint32_t>(A.part.m);
  h.nb = static_cast<uint32_t>(A.part.nb);
  h.eps = A.eps;
  h.seed = A.seed;
  h.tiles = static_cast<uint64_t>(A.diag.size() + A.off.size());
  write_header(os, h);
  for (int t = 0; t < A.nb(); t++) write_tile(os, t, t, A.diag[t]);
  for (int i = 0; i < A.nb(); i++)
    for (int j = 0; j < (A.symmetric ? i : A.nb()); j++) {
      if (j == i) continue;
      const OffTile& ot = A.off_tile(i, j);
      if (ot.kind == TileKind::dense)
        write_tile(os, i, j, ot.dense);
      else
        write_tile(os, i, j, ot.lr);
    }
  if (!os) throw std::runtime_error("snapshot: write failed: " + path);
}

void write_snapshot(const std::string& path, const TLRFactor& L) {
  auto os = open_out(path);
  Header h;
  h.kind = 1;
  h.symmetric = 1;
  h.dim = 0;
  h.N = static_cast<uint64_t>(L.n);
  h.m = static_cast<uint32_t>(L.part.m);
  h.nb = static_cast<uint32_t>(L.part.nb);
  h.eps = L.eps;
  h.seed = L.seed;
  h.tiles = static_cast<uint64_t>(L.diag.size() + L.sub.size());
  write_header(os, h);
  for (int t = 0; t < L.nb(); t++) write_tile(os, t, t, L.diag[t]);
  for (int i = 1; i < L.nb(); i++)
    for (int j = 0; j < i; j++) {
      const OffTile& ot = L.sub_tile(i, j);
      if (ot.kind == TileKind::dense)
        write_tile(os, i, j, ot.dense);
      else
        write_tile(os, i, j, ot.lr);
    }
  if (!os) throw std::runtime_error("snapshot: write failed: " + path);
}

TLRMatrix read_snapshot_matrix(const std::string& path) {
  auto is = open_in(path);
  Header h = read_header(is);
  if (h.kind != 0) throw std::runtime_error("snapshot: not an operator snapshot");
  TLRMatrix A;
  A.n = static_cast<int>(h.N);
  A.dim = static_cast<int>(h.dim);
  A.eps = h.eps;
  A.symmetric = h.symmetric != 0;
  A.seed = h.seed;
  A.part = uniform_partition(A.n, static_cast<int>(h.m), static_cast<int>(h.nb));
  A.diag.resize(h.nb);
  A.off.resize(A.symmetric ? static_cast<size_t>(h.nb) * (h.nb - 1) / 2
                           : static_cast<size_t>(h.nb) * (h.nb - 1));
  for (uint64_t t = 0; t < h.tiles; t++) {
    TileRecord r = read_tile(is);
    if (r.i == r.j)
      A.diag[r.i] = std::move(r.tile.dense);
    else
      A.off_tile(r.i, r.j) = std::move(r.tile);
  }
  return A;
}

TLRFactor read_snapshot_factor(const std::string& path) {
  auto is = open_in(path);
  Header h = read_header(is);
  if (h.kind != 1) throw std::runtime_error("snapshot: not a factor snapshot");
  TLRFactor L;
  L.n = static_cast<int>(h.N);
  L.eps = h.eps;
  L.seed = h.seed;
  L.part = uniform_partition(L.n, static_cast<int>(h.m), static_cast<int>(h.nb));
  L.diag.resize(h.nb);
  L.sub.resize(static_cast<size_t>(h.nb) * (h.nb - 1) / 2);
  L.compressions.assign(L.sub.size(), 0);
  for (uint64_t t = 0; t < h.tiles; t++) {
    TileRecord r = read_tile(is);
    if (r.i == r.j)
      L.diag[r.i] = std::move(r.tile.dense);
    else
      L.sub[L.sub_index(r.i, r.j)] = std::move(r.tile);
  }
  return L;
}

int snapshot_kind(const std::string& path) {
  auto is = open_in(path);
  Header h = read_header(is);
  return h.kind;
}

}  // namespace fradi
