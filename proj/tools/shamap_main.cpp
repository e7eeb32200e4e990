// Command-line front-end: dataset generation, embedding, metric reports and
// SVG scatter plots. Every command is deterministic for fixed arguments.
//
// Exit codes: 0 success, 2 usage, 3 data/format, 4 algorithmic precondition.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shamap/shamap.hpp"

namespace {

using namespace shamap;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ReferencePoint parse_reference(const std::string& text) {
  if (text == "origin") return ReferencePoint::origin();
  if (text == "centroid") return ReferencePoint::cloud_centroid();
  std::vector<double> vec;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string cell = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      vec.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw std::invalid_argument(
          "--ref expects 'origin', 'centroid' or a comma-separated vector; got '" +
          text + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return ReferencePoint::explicit_vec(std::move(vec));
}

std::pair<int, std::size_t> parse_take(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
    throw std::invalid_argument("--take expects LABEL:COUNT, got '" + text + "'");
  try {
    return {std::stoi(text.substr(0, colon)),
            static_cast<std::size_t>(std::stoul(text.substr(colon + 1)))};
  } catch (const std::exception&) {
    throw std::invalid_argument("--take expects LABEL:COUNT, got '" + text + "'");
  }
}

NeighborGraph build_graph(const PointCloud& cloud, const BuildRule& rule) {
  if (std::holds_alternative<KnnRule>(rule))
    return knn_graph(cloud, std::get<KnnRule>(rule).k);
  return eps_graph(cloud, std::get<EpsRule>(rule).eps);
}

Matrix vcat(const std::vector<Matrix>& parts) {
  std::size_t rows = 0;
  for (const Matrix& p : parts) rows += p.rows();
  Matrix out(rows, parts.front().cols());
  std::size_t r = 0;
  for (const Matrix& p : parts)
    for (std::size_t i = 0; i < p.rows(); ++i, ++r)
      for (std::size_t k = 0; k < p.cols(); ++k) out(r, k) = p(i, k);
  return out;
}

void write_spectrum_csv(const std::string& path,
                        const std::vector<double>& spectrum) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "eigenvalue\n";
  for (double v : spectrum) out << fmt17(v) << '\n';
}

// COIL-style names ("obj12__45.pgm") carry the object id before the double
// underscore. Labels are attached only when every file follows the pattern.
bool coil_label(const std::string& filename, int* label) {
  const std::string base = std::filesystem::path(filename).filename().string();
  if (base.rfind("obj", 0) != 0) return false;
  std::size_t i = 3, value = 0, digits = 0;
  while (i < base.size() && base[i] >= '0' && base[i] <= '9') {
    value = value * 10 + static_cast<std::size_t>(base[i] - '0');
    ++i;
    ++digits;
  }
  if (digits == 0 || base.compare(i, 2, "__") != 0) return false;
  *label = static_cast<int>(value);
  return true;
}

struct EmbedInput {
  PointCloud cloud;
  std::optional<LabelSet> labels;
};

struct EmbedArgs {
  std::string in_csv, idx_images, idx_labels, pgm_dir;
  std::vector<std::string> pgm_files, takes;
  std::string method = "shamap", ref = "origin", weight = "euclidean";
  std::size_t k = 0;
  double epsilon = 0.0;
  bool k_set = false, eps_set = false;
  std::size_t dim = 2;
  bool largest = false, clamp = false, center = false;
  std::size_t max_iters = 500;
  double step = 1.0;
  std::string out, spectrum_out, dump_theta, dump_cosine;
};

EmbedInput load_embed_input(const EmbedArgs& a) {
  const int sources = (!a.in_csv.empty() ? 1 : 0) +
                      (!a.idx_images.empty() ? 1 : 0) +
                      (!a.pgm_dir.empty() || !a.pgm_files.empty() ? 1 : 0);
  if (sources != 1)
    throw std::invalid_argument(
        "embed needs exactly one input source: --in, --idx-images, or --pgm/--pgm-dir");

  if (!a.in_csv.empty()) {
    CsvData csv = read_csv_file(a.in_csv);
    return {PointCloud(std::move(csv.values)), std::move(csv.labels)};
  }

  if (!a.idx_images.empty()) {
    const PointCloud all = cloud_from_idx_images(read_idx_file(a.idx_images));
    std::optional<LabelSet> labels;
    if (!a.idx_labels.empty()) {
      labels = labels_from_idx(read_idx_file(a.idx_labels));
      if (labels->size() != all.size())
        throw FormatError("label count " + std::to_string(labels->size()) +
                          " does not match image count " +
                          std::to_string(all.size()));
    }
    if (a.takes.empty()) return {all, std::move(labels)};
    if (!labels)
      throw std::invalid_argument("--take requires --idx-labels");
    std::vector<Matrix> parts;
    LabelSet taken;
    for (const std::string& t : a.takes) {
      const auto [wanted, count] = parse_take(t);
      parts.push_back(select_by_label(all, *labels, wanted, count).points());
      taken.insert(taken.end(), count, wanted);
    }
    return {PointCloud(vcat(parts)), std::move(taken)};
  }

  std::vector<std::string> files = a.pgm_files;
  if (!a.pgm_dir.empty()) {
    for (const auto& entry : std::filesystem::directory_iterator(a.pgm_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".pgm")
        files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw FormatError("no .pgm files to read");
  std::vector<GrayImage> images;
  LabelSet labels;
  bool all_coil = true;
  for (const std::string& f : files) {
    images.push_back(read_pgm_file(f));
    int label = 0;
    if (coil_label(f, &label))
      labels.push_back(label);
    else
      all_coil = false;
  }
  EmbedInput in{images_to_cloud(images), std::nullopt};
  if (all_coil) in.labels = std::move(labels);
  return in;
}

int run_embed(const EmbedArgs& a) {
  RunConfig cfg;
  if (a.method == "shamap")
    cfg.method = EmbedMethod::Shamap;
  else if (a.method == "isomap")
    cfg.method = EmbedMethod::Isomap;
  else if (a.method == "sammon")
    cfg.method = EmbedMethod::Sammon;
  else
    throw std::invalid_argument("--method must be shamap, isomap or sammon");

  if (a.k_set && a.eps_set)
    throw std::invalid_argument("--k and --epsilon are mutually exclusive");
  const bool needs_graph = cfg.method != EmbedMethod::Sammon || a.largest;
  if (needs_graph && !a.k_set && !a.eps_set)
    throw std::invalid_argument("one of --k or --epsilon is required");
  if (a.k_set) cfg.rule = KnnRule{a.k};
  if (a.eps_set) cfg.rule = EpsRule{a.epsilon};

  if (a.weight == "euclidean")
    cfg.weight_mode = WeightMode::Euclidean;
  else if (a.weight == "angular")
    cfg.weight_mode = WeightMode::Angular;
  else
    throw std::invalid_argument("--weight must be euclidean or angular");

  if (cfg.method != EmbedMethod::Shamap) {
    if (a.ref != "origin")
      throw std::invalid_argument("--ref only applies to --method shamap");
    if (a.weight != "euclidean")
      throw std::invalid_argument("--weight only applies to --method shamap");
    if (a.center)
      throw std::invalid_argument("--center only applies to --method shamap");
    if (!a.dump_theta.empty() || !a.dump_cosine.empty())
      throw std::invalid_argument(
          "--dump-theta/--dump-cosine only apply to --method shamap");
  }
  if (cfg.method == EmbedMethod::Sammon && a.clamp)
    throw std::invalid_argument("--clamp-negative does not apply to sammon");

  cfg.reference = parse_reference(a.ref);
  cfg.d = a.dim;
  cfg.opts.clamp_negative = a.clamp;
  cfg.opts.center = a.center;
  cfg.largest_component = a.largest;
  cfg.sammon_max_iters = a.max_iters;
  cfg.sammon_step = a.step;

  const EmbedInput input = load_embed_input(a);
  const RunResult result =
      run_embedding(input.cloud, cfg, input.labels ? &*input.labels : nullptr);

  if (!result.dropped.empty()) {
    std::cout << "dropped " << result.dropped.size()
              << " rows outside the largest component:";
    for (std::size_t i : result.dropped) std::cout << ' ' << i;
    std::cout << '\n';
  }
  write_csv_file(a.out, result.embedding.coords,
                 input.labels ? &result.labels : nullptr);
  std::cout << "wrote " << result.embedding.coords.rows() << " x "
            << result.embedding.coords.cols() << " embedding (" << a.method
            << ") to " << a.out << '\n';
  if (!a.spectrum_out.empty()) {
    write_spectrum_csv(a.spectrum_out, result.embedding.spectrum);
    std::cout << "wrote spectrum to " << a.spectrum_out << '\n';
  }
  if (result.embedding.stress)
    std::cout << "stress " << fmt17(*result.embedding.stress) << " ("
              << (result.embedding.converged ? "converged" : "max iterations")
              << ")\n";

  if (!a.dump_theta.empty() || !a.dump_cosine.empty()) {
    const PointCloud work = subset_cloud(input.cloud, result.kept);
    const std::vector<double> c = resolve_reference(cfg.reference, work);
    const NeighborGraph g = build_graph(work, cfg.rule);
    EdgeWeights table;
    const EdgeWeights* tp = nullptr;
    if (cfg.weight_mode == WeightMode::Angular) {
      table = edge_angle_table(g, work, c);
      tp = &table;
    }
    const GeodesicResult geo = all_pairs_shortest(g, cfg.weight_mode, tp);
    const AngleMatrix theta = accumulated_angles(work, c, geo, &g);
    if (!a.dump_theta.empty()) write_csv_file(a.dump_theta, theta.theta);
    if (!a.dump_cosine.empty())
      write_csv_file(a.dump_cosine, cosine_matrix(theta).c);
  }
  return 0;
}

struct EvalArgs {
  std::string in, truth, high, spectrum, csv_out;
  std::vector<std::string> metrics;
  std::string pair = "0,1";
};

int run_eval(const EvalArgs& a) {
  if (a.metrics.empty())
    throw std::invalid_argument("eval needs at least one --metric");
  const CsvData emb = read_csv_file(a.in);

  std::vector<std::pair<std::string, double>> rows;
  for (const std::string& name : a.metrics) {
    if (name == "winding") {
      rows.emplace_back("winding", winding_count(emb.values));
    } else if (name == "nn-accuracy") {
      if (!emb.labels)
        throw std::invalid_argument("nn-accuracy needs a label column");
      rows.emplace_back("nn-accuracy", nn_label_accuracy(emb.values, *emb.labels));
    } else if (name == "procrustes") {
      if (a.truth.empty())
        throw std::invalid_argument("procrustes needs --truth");
      const CsvData truth = read_csv_file(a.truth);
      rows.emplace_back("procrustes-rmse",
                        procrustes(truth.values, emb.values).rmse);
    } else if (name == "separation") {
      if (!emb.labels)
        throw std::invalid_argument("separation needs a label column");
      const std::size_t comma = a.pair.find(',');
      if (comma == std::string::npos)
        throw std::invalid_argument("--pair expects A,B labels");
      const int la = std::stoi(a.pair.substr(0, comma));
      const int lb = std::stoi(a.pair.substr(comma + 1));
      const SeparationReport rep = set_separation(emb.values, *emb.labels, la, lb);
      rows.emplace_back("min-cross", rep.min_cross);
      rows.emplace_back("hausdorff", rep.hausdorff);
      rows.emplace_back("diameter", diameter(emb.values));
    } else if (name == "spectral-ratio") {
      if (a.spectrum.empty())
        throw std::invalid_argument("spectral-ratio needs --spectrum");
      const CsvData spec = read_csv_file(a.spectrum);
      if (spec.values.cols() != 1)
        throw FormatError("spectrum file must have one column");
      std::vector<double> vals(spec.values.data().begin(),
                               spec.values.data().end());
      rows.emplace_back("spectral-ratio", spectral_ratio(vals));
    } else if (name == "stress") {
      if (a.high.empty()) throw std::invalid_argument("stress needs --high");
      const CsvData high = read_csv_file(a.high);
      rows.emplace_back("stress",
                        sammon_stress(PointCloud(high.values), emb.values));
    } else {
      throw std::invalid_argument("unknown metric '" + name + "'");
    }
  }

  std::size_t width = 0;
  for (const auto& [name, value] : rows) width = std::max(width, name.size());
  for (const auto& [name, value] : rows)
    std::cout << name << std::string(width - name.size() + 2, ' ')
              << fmt17(value) << '\n';
  if (!a.csv_out.empty()) {
    std::ofstream out(a.csv_out, std::ios::binary);
    if (!out) throw FormatError("cannot open " + a.csv_out + " for writing");
    out << "metric,value\n";
    for (const auto& [name, value] : rows)
      out << name << ',' << fmt17(value) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shape-based manifold learning: shamap, isomap and sammon embeddings"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate synthetic datasets");
  gen->require_subcommand(1);

  HelixSpec helix_spec;
  std::string gen_out, truth_out;
  auto add_helix_opts = [&](CLI::App* cmd) {
    cmd->add_option("--t-start", helix_spec.t_start, "parameter start");
    cmd->add_option("--t-end", helix_spec.t_end, "parameter end");
    cmd->add_option("--t-step", helix_spec.t_step, "parameter step");
    cmd->add_option("--pitch", helix_spec.pitch, "z advance per unit t");
    cmd->add_option("--phase", helix_spec.phase, "phase offset");
    cmd->add_option("--radius", helix_spec.radius, "cylinder radius");
    cmd->add_option("--out", gen_out, "output CSV")->required();
  };

  auto* g_helix = gen->add_subcommand("helix", "single helix");
  add_helix_opts(g_helix);
  g_helix->callback([&] {
    const PointCloud cloud = gen_helix(helix_spec);
    write_csv_file(gen_out, cloud.points());
    std::cout << "wrote " << cloud.size() << " rows x " << cloud.dim()
              << " cols to " << gen_out << '\n';
  });

  auto* g_double = gen->add_subcommand("double-helix", "two interleaved strands");
  add_helix_opts(g_double);
  g_double->callback([&] {
    const auto [cloud, labels] = gen_double_helix(helix_spec);
    write_csv_file(gen_out, cloud.points(), &labels);
    std::cout << "wrote " << cloud.size() << " rows x " << cloud.dim()
              << " cols (+ label column) to " << gen_out << '\n';
  });

  ToyProteinSpec protein_spec;
  auto* g_protein = gen->add_subcommand("protein", "helix-sheet-helix chain");
  g_protein->add_option("--helix-turns", protein_spec.helix_turns, "turns per helix");
  g_protein->add_option("--sheet-periods", protein_spec.sheet_periods,
                        "cosine periods in the sheet");
  g_protein->add_option("--samples-per-segment", protein_spec.samples_per_segment,
                        "points per segment");
  g_protein->add_option("--radius", protein_spec.radius, "helix radius");
  g_protein->add_option("--pitch", protein_spec.pitch, "helix pitch");
  g_protein->add_option("--sheet-amplitude", protein_spec.sheet_amplitude,
                        "sheet z amplitude");
  g_protein->add_option("--sheet-length", protein_spec.sheet_length,
                        "sheet x extent (<0: one helix's axial extent)");
  g_protein->add_option("--out", gen_out, "output CSV")->required();
  g_protein->callback([&] {
    const PointCloud cloud = gen_toy_protein(protein_spec);
    write_csv_file(gen_out, cloud.points());
    std::cout << "wrote " << cloud.size() << " rows x " << cloud.dim()
              << " cols to " << gen_out << '\n';
  });

  std::size_t plane_n = 200, plane_ambient = 5;
  std::uint64_t plane_seed = 0;
  auto* g_plane = gen->add_subcommand("plane", "2-D square in a rotated subspace");
  g_plane->add_option("--n", plane_n, "sample count");
  g_plane->add_option("--ambient", plane_ambient, "ambient dimension");
  g_plane->add_option("--seed", plane_seed, "generator seed");
  g_plane->add_option("--out", gen_out, "output CSV (high-dimensional)")->required();
  g_plane->add_option("--truth-out", truth_out, "ground-truth 2-D CSV");
  g_plane->callback([&] {
    const auto [high, truth] = gen_embedded_plane(plane_n, plane_ambient, plane_seed);
    write_csv_file(gen_out, high.points());
    std::cout << "wrote " << high.size() << " rows x " << high.dim()
              << " cols to " << gen_out << '\n';
    if (!truth_out.empty()) {
      write_csv_file(truth_out, truth.points());
      std::cout << "wrote " << truth.size() << " rows x " << truth.dim()
                << " cols to " << truth_out << '\n';
    }
  });

  // embed
  EmbedArgs ea;
  auto* embed = app.add_subcommand("embed", "compute an embedding");
  embed->add_option("--in", ea.in_csv, "input point CSV");
  embed->add_option("--idx-images", ea.idx_images, "IDX image tensor");
  embed->add_option("--idx-labels", ea.idx_labels, "IDX label vector");
  embed->add_option("--take", ea.takes, "LABEL:COUNT selection (repeatable)");
  embed->add_option("--pgm", ea.pgm_files, "PGM image file (repeatable)");
  embed->add_option("--pgm-dir", ea.pgm_dir, "directory of .pgm images");
  embed->add_option("--method", ea.method, "shamap | isomap | sammon");
  auto* opt_k = embed->add_option("--k", ea.k, "K-nearest-neighbor rule");
  auto* opt_eps = embed->add_option("--epsilon", ea.epsilon, "radius rule");
  embed->add_option("--dim", ea.dim, "target dimension");
  embed->add_option("--ref", ea.ref, "origin | centroid | x,y,...");
  embed->add_option("--weight", ea.weight, "euclidean | angular path weights");
  embed->add_flag("--largest-component", ea.largest,
                  "drop rows outside the largest graph component");
  embed->add_flag("--clamp-negative", ea.clamp,
                  "clamp negative selected eigenvalues to zero");
  embed->add_flag("--center", ea.center, "double-center the cosine matrix");
  embed->add_option("--max-iters", ea.max_iters, "sammon iteration cap");
  embed->add_option("--step", ea.step, "sammon initial step size");
  embed->add_option("--out", ea.out, "embedding CSV")->required();
  embed->add_option("--spectrum-out", ea.spectrum_out, "eigenvalue CSV");
  embed->add_option("--dump-theta", ea.dump_theta, "accumulated-angle matrix CSV");
  embed->add_option("--dump-cosine", ea.dump_cosine, "cosine matrix CSV");
  embed->callback([&] {
    ea.k_set = opt_k->count() > 0;
    ea.eps_set = opt_eps->count() > 0;
    run_embed(ea);
  });

  // plot
  std::string plot_in, plot_out;
  SvgOptions svg_opts;
  auto* plot = app.add_subcommand("plot", "render a 2-D embedding as SVG");
  plot->add_option("--in", plot_in, "embedding CSV")->required();
  plot->add_option("--out", plot_out, "output SVG")->required();
  plot->add_option("--width", svg_opts.width, "canvas width");
  plot->add_option("--height", svg_opts.height, "canvas height");
  plot->add_option("--marker", svg_opts.marker, "marker radius");
  plot->add_option("--title", svg_opts.title, "plot title");
  plot->callback([&] {
    const CsvData csv = read_csv_file(plot_in);
    if (csv.values.cols() != 2)
      throw std::invalid_argument("plot needs a 2-D embedding, got " +
                                  std::to_string(csv.values.cols()) + " dims");
    write_text_file(plot_out, scatter_svg(csv.values,
                                          csv.labels ? &*csv.labels : nullptr,
                                          svg_opts));
    std::cout << "wrote " << csv.values.rows() << " markers to " << plot_out
              << '\n';
  });

  // eval
  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "print embedding metrics");
  eval->add_option("--in", ev.in, "embedding CSV")->required();
  eval->add_option("--metric", ev.metrics,
                   "winding | nn-accuracy | procrustes | separation | "
                   "spectral-ratio | stress (repeatable)");
  eval->add_option("--truth", ev.truth, "ground-truth CSV (procrustes)");
  eval->add_option("--high", ev.high, "original high-dimensional CSV (stress)");
  eval->add_option("--spectrum", ev.spectrum, "eigenvalue CSV (spectral-ratio)");
  eval->add_option("--pair", ev.pair, "label pair A,B for separation");
  eval->add_option("--csv", ev.csv_out, "also write metrics as CSV");
  eval->callback([&] { run_eval(ev); });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const shamap::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const shamap::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
