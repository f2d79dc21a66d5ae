#include "histofeat/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "histofeat/error.hpp"

namespace histofeat {

static_assert(std::endian::native == std::endian::little, "HFM1 I/O assumes a little-endian host");

namespace {

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out_.append(buf, sizeof(T));
  }
  void u8(std::uint8_t v) { put(v); }
  void u32(std::uint32_t v) { put(v); }
  void u64(std::uint64_t v) { put(v); }
  void f64(double v) { put(v); }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > in_.size()) throw Error(ErrorKind::Format, "truncated model file at byte " + std::to_string(pos_));
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::uint8_t u8() { return get<std::uint8_t>(); }
  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  double f64() { return get<double>(); }

  /// Element count guarded against the bytes that remain.
  std::size_t count(std::size_t element_bytes) {
    const std::uint64_t n = u64();
    if (element_bytes > 0 && n > (in_.size() - pos_) / element_bytes)
      throw Error(ErrorKind::Format, "implausible element count " + std::to_string(n));
    return static_cast<std::size_t>(n);
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  const std::string& in_;
  std::size_t pos_ = 0;
};

Label read_label(Reader& r) {
  const auto v = r.u8();
  if (v > 1) throw Error(ErrorKind::Format, "bad label byte " + std::to_string(v));
  return static_cast<Label>(v);
}

void write_matrix(Writer& w, const Matrix& m) {
  w.u64(m.rows());
  w.u64(m.cols());
  for (double v : m.data()) w.f64(v);
}

Matrix read_matrix(Reader& r) {
  const std::size_t rows = r.count(0);
  const std::size_t cols = r.count(0);
  if (cols != 0 && rows > (std::size_t{1} << 40) / cols) throw Error(ErrorKind::Format, "implausible matrix size");
  std::vector<double> data(rows * cols);
  for (auto& v : data) v = r.f64();
  return Matrix(rows, cols, std::move(data));
}

void write_tree(Writer& w, const TreeModel& t) {
  w.u64(t.n_features);
  w.u64(t.nodes.size());
  for (const auto& n : t.nodes) {
    w.u32(n.feature);
    w.f64(n.threshold);
    w.u32(n.left);
    w.u32(n.right);
    w.u8(static_cast<std::uint8_t>(n.label));
    w.u32(n.counts[0]);
    w.u32(n.counts[1]);
  }
}

TreeModel read_tree(Reader& r) {
  TreeModel t;
  t.n_features = r.u64();
  const std::size_t n = r.count(29);
  t.nodes.resize(n);
  for (auto& node : t.nodes) {
    node.feature = r.u32();
    node.threshold = r.f64();
    node.left = r.u32();
    node.right = r.u32();
    node.label = read_label(r);
    node.counts[0] = r.u32();
    node.counts[1] = r.u32();
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = t.nodes[i];
    if (node.is_leaf()) continue;
    if (node.left <= i || node.right <= i || node.left >= n || node.right >= n || node.feature >= t.n_features)
      throw Error(ErrorKind::Format, "corrupt tree node " + std::to_string(i));
  }
  if (n == 0) throw Error(ErrorKind::Format, "tree without nodes");
  return t;
}

}  // namespace

std::string serialize_model(const Pipeline& pipeline) {
  Writer w;
  w.raw("HFM1", 4);
  w.u32(kModelFormatVersion);
  w.u8(static_cast<std::uint8_t>(model_kind(pipeline.model)));
  w.u8(pipeline.scaler ? 1 : 0);
  if (pipeline.scaler) {
    w.u64(pipeline.scaler->mean.size());
    for (double v : pipeline.scaler->mean) w.f64(v);
    for (double v : pipeline.scaler->stddev) w.f64(v);
  }

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, TreeModel>) {
          write_tree(w, m);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          w.u64(m.trees.size());
          for (std::size_t t = 0; t < m.trees.size(); ++t) {
            w.u64(m.tree_seeds[t]);
            write_tree(w, m.trees[t]);
          }
        } else if constexpr (std::is_same_v<T, KnnModel>) {
          w.u64(m.k);
          write_matrix(w, m.x);
          for (Label l : m.y) w.u8(static_cast<std::uint8_t>(l));
        } else {
          w.f64(m.gamma);
          w.f64(m.bias);
          w.u8(m.converged ? 1 : 0);
          w.u64(m.iterations);
          write_matrix(w, m.support_vectors);
          for (double c : m.coef) w.f64(c);
        }
      },
      pipeline.model);
  return w.take();
}

Pipeline deserialize_model(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, "HFM1") != 0) throw Error(ErrorKind::Format, "not an HFM1 model file");
  Reader r(bytes);
  r.u32();  // magic
  const auto version = r.u32();
  if (version != kModelFormatVersion) throw Error(ErrorKind::Format, "unsupported model version " + std::to_string(version));
  const auto kind = r.u8();
  const auto has_scaler = r.u8();

  Pipeline p;
  if (has_scaler > 1) throw Error(ErrorKind::Format, "bad scaler flag");
  if (has_scaler) {
    const std::size_t width = r.count(16);
    Scaler s{std::vector<double>(width), std::vector<double>(width)};
    for (auto& v : s.mean) v = r.f64();
    for (auto& v : s.stddev) v = r.f64();
    p.scaler = std::move(s);
  }

  switch (static_cast<ClassifierKind>(kind)) {
    case ClassifierKind::DT: p.model = read_tree(r); break;
    case ClassifierKind::RF: {
      ForestModel f;
      const std::size_t n = r.count(24);
      for (std::size_t t = 0; t < n; ++t) {
        f.tree_seeds.push_back(r.u64());
        f.trees.push_back(read_tree(r));
      }
      p.model = std::move(f);
      break;
    }
    case ClassifierKind::KNN: {
      KnnModel m;
      m.k = r.u64();
      m.x = read_matrix(r);
      m.y.resize(m.x.rows());
      for (auto& l : m.y) l = read_label(r);
      p.model = std::move(m);
      break;
    }
    case ClassifierKind::SVM: {
      SvmModel m;
      m.gamma = r.f64();
      m.bias = r.f64();
      m.converged = r.u8() != 0;
      m.iterations = r.u64();
      m.support_vectors = read_matrix(r);
      m.coef.resize(m.support_vectors.rows());
      for (auto& c : m.coef) c = r.f64();
      p.model = std::move(m);
      break;
    }
    default: throw Error(ErrorKind::Format, "unknown classifier kind " + std::to_string(kind));
  }
  if (!r.done()) throw Error(ErrorKind::Format, "trailing bytes after model payload");
  return p;
}

void save_model(const Pipeline& pipeline, const std::filesystem::path& path) {
  const std::string bytes = serialize_model(pipeline);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

Pipeline load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace histofeat
