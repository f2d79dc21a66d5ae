#include "histofeat/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "histofeat/deepfeat.hpp"
#include "histofeat/descriptors.hpp"
#include "histofeat/error.hpp"
#include "histofeat/evaluation.hpp"
#include "histofeat/ingestion.hpp"
#include "histofeat/model_io.hpp"
#include "histofeat/parallel.hpp"

namespace histofeat {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string root;
  std::vector<std::string> descriptors;
  std::vector<std::string> classifiers{"dt", "knn", "svm", "rf"};
  std::uint64_t seed = 0;
  std::size_t folds = 5;
  std::string positive = "normal";
  std::vector<std::string> deep;  // name=csv
  std::string out = ".";
  std::string features;  // defaults to out
  bool save_models = false;
  std::vector<std::string> inputs;  // combine
};

/// Files created by the current command; removed unless commit() is called.
class OutputGuard {
 public:
  void add(fs::path p) { paths_.push_back(std::move(p)); }
  void commit() { paths_.clear(); }
  ~OutputGuard() {
    std::error_code ec;
    for (const auto& p : paths_) fs::remove(p, ec);
  }

 private:
  std::vector<fs::path> paths_;
};

void write_text(const fs::path& path, const std::string& text, OutputGuard& guard) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
  }
  fs::rename(tmp, path);
  guard.add(path);
}

std::vector<DescriptorKind> parse_descriptors(const std::vector<std::string>& names) {
  std::vector<DescriptorKind> out;
  for (const auto& n : names) {
    const auto d = parse_descriptor(n);
    if (!d) throw Error(ErrorKind::Config, "unknown descriptor '" + n + "' (known: ch1,ch2,lm,zm,har,lbp,hist,ac,haar)");
    out.push_back(*d);
  }
  return out;
}

Label parse_positive(const std::string& text) {
  const auto l = parse_label(text);
  if (!l) throw Error(ErrorKind::Config, "--positive must be 'normal' or 'abnormal'");
  return *l;
}

void require_root(const RunConfig& cfg) {
  if (cfg.root.empty()) throw Error(ErrorKind::Config, "--root is required");
}

int cmd_extract(const RunConfig& cfg, std::ostream& out) {
  require_root(cfg);
  const auto kinds = parse_descriptors(cfg.descriptors);
  const Dataset dataset = load_dataset(cfg.root);
  fs::create_directories(cfg.out);

  std::vector<std::vector<std::vector<double>>> values(kinds.size(), std::vector<std::vector<double>>(dataset.size()));
  parallel_for(dataset.size(), [&](std::size_t i) {
    const Sample& s = dataset.samples[i];
    const GrayImage image = decode_and_gray(dataset.root / s.id);
    for (std::size_t d = 0; d < kinds.size(); ++d) {
      try {
        FeatureVector fv = extract(kinds[d], image);
        if (!fv.all_finite()) throw Error(ErrorKind::Domain, "non-finite feature value");
        values[d][i] = std::move(fv.values);
      } catch (const Error& e) {
        throw Error(e.kind(), "sample " + s.id + ", descriptor " + std::string(to_string(kinds[d])) + ": " + e.what());
      }
    }
  });

  OutputGuard guard;
  for (std::size_t d = 0; d < kinds.size(); ++d) {
    FeatureTable table;
    table.descriptor = std::string(to_string(kinds[d]));
    for (std::size_t i = 0; i < dataset.size(); ++i)
      table.insert(dataset.samples[i].id, dataset.samples[i].label, std::move(values[d][i]));
    const fs::path path = fs::path(cfg.out) / (table.descriptor + ".csv");
    write_feature_csv(table, path);
    guard.add(path);
    out << "wrote " << path.string() << " (" << table.rows.size() << " x " << table.dim << ")\n";
  }
  guard.commit();
  return 0;
}

struct NamedTable {
  std::string name;
  FeatureTable table;
};

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  require_root(cfg);
  const auto kinds = parse_descriptors(cfg.descriptors);
  std::vector<ClassifierKind> classifiers;
  for (const auto& c : cfg.classifiers) {
    const auto k = parse_classifier(c);
    if (!k) throw Error(ErrorKind::Config, "unknown classifier '" + c + "' (known: dt,knn,svm,rf)");
    classifiers.push_back(*k);
  }
  if (classifiers.empty()) throw Error(ErrorKind::Config, "--clf lists no classifiers");
  const Label positive = parse_positive(cfg.positive);
  const fs::path feature_dir = cfg.features.empty() ? fs::path(cfg.out) : fs::path(cfg.features);

  std::vector<NamedTable> tables;
  for (DescriptorKind k : kinds) {
    const std::string name(to_string(k));
    const fs::path path = feature_dir / (name + ".csv");
    if (!fs::exists(path))
      throw Error(ErrorKind::Io, "missing feature file " + path.string() + "; run `histofeat extract --root " + cfg.root +
                                     " --desc " + name + " --out " + feature_dir.string() + "` first");
    tables.push_back({name, read_feature_csv(path)});
  }
  for (const auto& entry : cfg.deep) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
      throw Error(ErrorKind::Config, "--deep expects <name>=<csv>, got '" + entry + "'");
    const std::string name = entry.substr(0, eq);
    const fs::path path = entry.substr(eq + 1);
    if (!fs::exists(path)) throw Error(ErrorKind::Io, "missing deep feature file " + path.string());
    tables.push_back({name, read_feature_csv(path)});
  }
  if (tables.empty()) throw Error(ErrorKind::Config, "nothing to evaluate: give --desc and/or --deep");

  const Dataset dataset = load_dataset(cfg.root);
  const FoldPlan plan = stratified_folds(dataset, cfg.folds, cfg.seed);

  std::vector<AlignedFeatures> aligned;
  for (auto& t : tables) {
    t.table.descriptor = t.name;
    aligned.push_back(align_to_dataset(t.table, dataset));
  }

  struct Cell {
    std::size_t table;
    ClassifierKind clf;
  };
  std::vector<Cell> cells;
  for (std::size_t t = 0; t < tables.size(); ++t)
    for (ClassifierKind c : classifiers) cells.push_back({t, c});

  auto spec_for = [&](ClassifierKind c) {
    ClassifierSpec spec;
    spec.kind = c;
    spec.seed = cfg.seed;
    spec.threads = 1;
    return spec;
  };

  std::vector<CvResult> results(cells.size());
  parallel_for(cells.size(), [&](std::size_t i) {
    const auto& cell = cells[i];
    const auto& data = aligned[cell.table];
    CvResult r = cross_validate(data.x, data.y, spec_for(cell.clf), plan, {positive, 1});
    r.descriptor = tables[cell.table].name;
    results[i] = std::move(r);
  });

  for (const auto& r : results)
    if (r.nonconverged_folds)
      err << "warning: SMO hit its iteration cap in " << r.nonconverged_folds << " fold(s) for " << r.descriptor << "/"
          << to_string(r.classifier) << "\n";

  OutputGuard guard;
  fs::create_directories(cfg.out);
  write_text(fs::path(cfg.out) / "report.md", render_markdown(results), guard);
  write_text(fs::path(cfg.out) / "report.csv", render_csv(results), guard);

  if (cfg.save_models) {
    const fs::path model_dir = fs::path(cfg.out) / "models";
    fs::create_directories(model_dir);
    for (const auto& cell : cells) {
      const auto& data = aligned[cell.table];
      const Pipeline p = fit(data.x, data.y, spec_for(cell.clf));
      const fs::path path = model_dir / (tables[cell.table].name + "." + std::string(to_string(cell.clf)) + ".hfm");
      save_model(p, path);
      guard.add(path);
    }
  }
  guard.commit();
  out << render_markdown(results);
  return 0;
}

int cmd_combine(const RunConfig& cfg, std::ostream& out) {
  if (cfg.inputs.size() < 2) throw Error(ErrorKind::Config, "combine needs at least two input CSV files");
  if (cfg.out.empty() || fs::is_directory(cfg.out)) throw Error(ErrorKind::Config, "combine --out must name a CSV file");
  std::vector<FeatureTable> tables;
  for (const auto& in : cfg.inputs) tables.push_back(read_feature_csv(in));
  const FeatureTable combined = combine(tables);
  write_feature_csv(combined, cfg.out);
  out << "wrote " << cfg.out << " (" << combined.rows.size() << " x " << combined.dim << ", " << combined.descriptor
      << ")\n";
  return 0;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  const fs::path csv = fs::path(cfg.out) / "report.csv";
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + csv.string() + "; run `histofeat evaluate` first");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto results = parse_report_csv(ss.str());
  OutputGuard guard;
  const std::string md = render_markdown(results);
  write_text(fs::path(cfg.out) / "report.md", md, guard);
  guard.commit();
  out << md;
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Handcrafted and deep feature benchmarking for histopathology tiles", "histofeat"};
  app.set_config("--config", "", "key=value configuration file (command-line flags take precedence)");
  app.require_subcommand(1);

  // Options live on the top-level app so flat config keys reach them; the
  // subcommands fall through to it.
  app.add_option("--root", cfg.root, "Dataset root with normal/ and abnormal/ subdirectories");
  app.add_option("--desc", cfg.descriptors, "Descriptors: ch1,ch2,lm,zm,har,lbp,hist,ac,haar (default: all)")->delimiter(',');
  app.add_option("--clf", cfg.classifiers, "Classifiers: dt,knn,svm,rf")->delimiter(',')->capture_default_str();
  app.add_option("--seed", cfg.seed, "Master seed for folds and learners")->capture_default_str();
  app.add_option("--folds", cfg.folds, "Cross-validation folds")->check(CLI::Range(2, 1000))->capture_default_str();
  app.add_option("--positive", cfg.positive, "Positive class for metrics")->check(CLI::IsMember({"normal", "abnormal"}))
      ->capture_default_str();
  app.add_option("--deep", cfg.deep, "Deep feature table <name>=<csv> (repeatable)");
  app.add_option("--out", cfg.out, "Output directory (combine: output CSV file)")->capture_default_str();
  app.add_option("--features", cfg.features, "Directory holding <desc>.csv files (default: --out)");
  app.add_flag("--save-models", cfg.save_models, "Also fit every cell on all samples and save HFM1 models");

  auto* extract_cmd = app.add_subcommand("extract", "Compute descriptor CSVs for every image");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Cross-validate descriptor x classifier grid");
  auto* combine_cmd = app.add_subcommand("combine", "Concatenate feature CSVs by sample id");
  auto* report_cmd = app.add_subcommand("report", "Re-render report.md from report.csv");
  combine_cmd->add_option("inputs", cfg.inputs, "Input feature CSV files")->required();
  for (auto* sub : {extract_cmd, evaluate_cmd, combine_cmd, report_cmd}) sub->fallthrough();

  std::vector<std::string> argv_storage{"histofeat"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  // Without --desc (or --deep for evaluate) every descriptor is used.
  if (cfg.descriptors.empty() && (*extract_cmd || (*evaluate_cmd && cfg.deep.empty())))
    for (auto d : kAllDescriptors) cfg.descriptors.emplace_back(to_string(d));

  try {
    if (*extract_cmd) return cmd_extract(cfg, out);
    if (*evaluate_cmd) return cmd_evaluate(cfg, out, err);
    if (*combine_cmd) return cmd_combine(cfg, out);
    if (*report_cmd) return cmd_report(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace histofeat
