#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "histofeat/cli.hpp"
#include "histofeat/deepfeat.hpp"
#include "histofeat/descriptors.hpp"
#include "histofeat/error.hpp"
#include "histofeat/evaluation.hpp"
#include "histofeat/image.hpp"
#include "histofeat/ingestion.hpp"
#include "histofeat/model_io.hpp"

namespace py = pybind11;
using namespace histofeat;

namespace {

using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const F64Array& a) {
  if (a.ndim() != 2) throw Error(ErrorKind::Shape, "expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

py::array_t<double> to_array(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Label label_of(const py::handle& h) {
  if (py::isinstance<py::str>(h)) {
    const auto s = h.cast<std::string>();
    if (auto l = parse_label(s)) return *l;
    throw Error(ErrorKind::Config, "unknown label '" + s + "'");
  }
  const auto v = h.cast<long>();
  if (v != 0 && v != 1) throw Error(ErrorKind::Config, "labels must be 0 (normal) or 1 (abnormal)");
  return static_cast<Label>(v);
}

std::vector<Label> to_labels(const py::iterable& seq) {
  std::vector<Label> out;
  for (auto h : seq) out.push_back(label_of(h));
  return out;
}

std::vector<int> label_codes(const std::vector<Label>& y) {
  std::vector<int> out;
  out.reserve(y.size());
  for (Label l : y) out.push_back(static_cast<int>(l));
  return out;
}

GrayImage to_gray_image(const U8Array& a) {
  if (a.ndim() != 2) throw Error(ErrorKind::Shape, "expected a 2-D uint8 array (height, width)");
  const auto h = static_cast<std::size_t>(a.shape(0));
  const auto w = static_cast<std::size_t>(a.shape(1));
  return GrayImage(w, h, std::vector<std::uint8_t>(a.data(), a.data() + w * h));
}

py::array_t<std::uint8_t> from_gray_image(const GrayImage& g) {
  py::array_t<std::uint8_t> out({g.height, g.width});
  std::copy(g.data.begin(), g.data.end(), out.mutable_data());
  return out;
}

DescriptorKind descriptor_of(const std::string& name) {
  if (auto d = parse_descriptor(name)) return *d;
  throw Error(ErrorKind::Config, "unknown descriptor '" + name + "'");
}

ClassifierSpec make_spec(const std::string& clf, std::uint64_t seed, std::size_t trees, std::size_t k,
                         double c, std::optional<double> gamma, std::size_t threads) {
  ClassifierSpec spec;
  auto kind = parse_classifier(clf);
  if (!kind) throw Error(ErrorKind::Config, "unknown classifier '" + clf + "'");
  spec.kind = *kind;
  spec.seed = seed;
  spec.trees = trees;
  spec.k = k;
  spec.c = c;
  spec.gamma = gamma;
  spec.threads = threads;
  spec.validate();
  return spec;
}

py::dict metrics_dict(const MetricsReport& m) {
  py::dict d;
  d["a"] = m.a;
  d["p"] = m.p;
  d["r"] = m.r;
  d["s"] = m.s;
  d["f1"] = m.f1;
  d["mcc"] = m.mcc;
  d["bacc"] = m.bacc;
  return d;
}

py::dict table_dict(const FeatureTable& t) {
  std::vector<std::string> ids;
  std::vector<Label> labels;
  Matrix x(t.rows.size(), t.dim);
  std::size_t i = 0;
  for (const auto& [id, row] : t.rows) {
    ids.push_back(id);
    labels.push_back(row.label);
    std::copy(row.values.begin(), row.values.end(), x.row(i++).begin());
  }
  py::dict d;
  d["descriptor"] = t.descriptor;
  d["ids"] = ids;
  d["labels"] = label_codes(labels);
  d["x"] = to_array(x);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Handcrafted histopathology features and classical classifiers";

  py::register_exception<Error>(m, "HistofeatError", PyExc_RuntimeError);

  m.def("descriptors", [] {
    std::vector<std::string> out;
    for (auto d : kAllDescriptors) out.emplace_back(to_string(d));
    return out;
  });
  m.def("descriptor_dim", [](const std::string& name) { return descriptor_dim(descriptor_of(name)); });

  m.def("decode_gray", [](const std::filesystem::path& p) { return from_gray_image(decode_and_gray(p)); },
        py::arg("path"));
  m.def("write_png", [](const U8Array& a, const std::filesystem::path& p) { write_png(to_gray_image(a), p); },
        py::arg("image"), py::arg("path"));

  m.def(
      "extract",
      [](const std::string& name, const U8Array& image) {
        const auto kind = descriptor_of(name);
        const GrayImage g = to_gray_image(image);
        FeatureVector v;
        {
          py::gil_scoped_release release;
          v = extract(kind, g);
        }
        py::array_t<double> out(v.values.size());
        std::copy(v.values.begin(), v.values.end(), out.mutable_data());
        return out;
      },
      py::arg("descriptor"), py::arg("image"), "Feature vector of a 2-D uint8 grayscale image.");

  m.def(
      "load_dataset",
      [](const std::filesystem::path& root) {
        const Dataset ds = load_dataset(root);
        std::vector<std::string> ids;
        for (const auto& s : ds.samples) ids.push_back(s.id);
        return py::make_tuple(ids, label_codes(ds.labels()));
      },
      py::arg("root"), "Returns (ids, labels) with labels 0 = normal, 1 = abnormal.");

  m.def(
      "stratified_folds",
      [](const py::iterable& labels, std::size_t k, std::uint64_t seed) {
        return stratified_folds(to_labels(labels), k, seed).assignment;
      },
      py::arg("labels"), py::arg("k") = 5, py::arg("seed") = 0);

  m.def("read_feature_csv", [](const std::filesystem::path& p) { return table_dict(read_feature_csv(p)); },
        py::arg("path"));
  m.def(
      "write_feature_csv",
      [](const std::filesystem::path& path, const std::string& descriptor, const std::vector<std::string>& ids,
         const py::iterable& labels, const F64Array& x) {
        const Matrix mx = to_matrix(x);
        const auto y = to_labels(labels);
        if (ids.size() != mx.rows() || y.size() != mx.rows())
          throw Error(ErrorKind::Shape, "ids, labels and rows must have the same length");
        FeatureTable t;
        t.descriptor = descriptor;
        for (std::size_t i = 0; i < ids.size(); ++i) {
          const auto r = mx.row(i);
          t.insert(ids[i], y[i], std::vector<double>(r.begin(), r.end()));
        }
        write_feature_csv(t, path);
      },
      py::arg("path"), py::arg("descriptor"), py::arg("ids"), py::arg("labels"), py::arg("x"));

  m.def(
      "compute_metrics",
      [](std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn) {
        return metrics_dict(compute_metrics({tp, fp, fn, tn}));
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn"));

  m.def(
      "cross_validate",
      [](const F64Array& x, const py::iterable& labels, const std::string& clf, std::size_t folds,
         std::uint64_t seed, const std::string& positive, std::size_t trees, std::size_t k, double c,
         std::optional<double> gamma, std::size_t threads) {
        const Matrix mx = to_matrix(x);
        const auto y = to_labels(labels);
        const auto pos = parse_label(positive);
        if (!pos) throw Error(ErrorKind::Config, "unknown positive class '" + positive + "'");
        const ClassifierSpec spec = make_spec(clf, seed, trees, k, c, gamma, threads);
        CvResult r;
        {
          py::gil_scoped_release release;
          r = cross_validate(mx, y, spec, stratified_folds(y, folds, seed), {*pos, threads});
        }
        py::dict d = metrics_dict(r.metrics);
        d["confusion"] = py::make_tuple(r.pooled.tp, r.pooled.fp, r.pooled.fn, r.pooled.tn);
        d["predictions"] = label_codes(r.predictions);
        d["nonconverged_folds"] = r.nonconverged_folds;
        return d;
      },
      py::arg("x"), py::arg("labels"), py::arg("clf") = "rf", py::arg("folds") = 5, py::arg("seed") = 0,
      py::arg("positive") = "normal", py::arg("trees") = 100, py::arg("k") = 3, py::arg("c") = 1.0,
      py::arg("gamma") = py::none(), py::arg("threads") = 0);

  py::class_<Pipeline>(m, "Model")
      .def("predict",
           [](const Pipeline& p, const F64Array& x) { return label_codes(p.predict(to_matrix(x))); })
      .def_property_readonly("kind", [](const Pipeline& p) { return std::string(to_string(model_kind(p.model))); })
      .def("save", [](const Pipeline& p, const std::filesystem::path& path) { save_model(p, path); })
      .def("to_bytes", [](const Pipeline& p) { return py::bytes(serialize_model(p)); })
      .def_static("load", [](const std::filesystem::path& path) { return load_model(path); })
      .def_static("from_bytes", [](const py::bytes& b) { return deserialize_model(std::string(b)); });

  m.def(
      "fit",
      [](const F64Array& x, const py::iterable& labels, const std::string& clf, std::uint64_t seed,
         std::size_t trees, std::size_t k, double c, std::optional<double> gamma, std::size_t threads) {
        const Matrix mx = to_matrix(x);
        const auto y = to_labels(labels);
        const ClassifierSpec spec = make_spec(clf, seed, trees, k, c, gamma, threads);
        py::gil_scoped_release release;
        return fit(mx, y, spec);
      },
      py::arg("x"), py::arg("labels"), py::arg("clf") = "rf", py::arg("seed") = 0, py::arg("trees") = 100,
      py::arg("k") = 3, py::arg("c") = 1.0, py::arg("gamma") = py::none(), py::arg("threads") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a histofeat command; returns (exit_code, stdout, stderr).");
}
