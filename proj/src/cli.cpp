#include "loometric/cli.hpp"

#include "loometric/embed.hpp"
#include "loometric/experiment.hpp"
#include "loometric/gh.hpp"
#include "loometric/io.hpp"
#include "loometric/obstruction.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <memory>

namespace loometric {

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("loometric", sink);
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("LOOMETRIC_LOG")) {
    const std::string level = env;
    if (level == "error") log->set_level(spdlog::level::err);
    else if (level == "info") log->set_level(spdlog::level::info);
    else if (level == "debug") log->set_level(spdlog::level::debug);
  }
  return log;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t s = 0;
  while (s <= text.size()) {
    std::size_t e = text.find(',', s);
    if (e == std::string::npos) e = text.size();
    const std::string item = text.substr(s, e - s);
    std::size_t used = 0;
    const auto v = std::stoull(item, &used);
    if (used != item.size() || v == 0) throw std::invalid_argument("bad list entry '" + item + "'");
    out.push_back(v);
    s = e + 1;
  }
  return out;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::shared_ptr<spdlog::logger> log;
  std::string out_path;
  std::string format;

  void emit(const Json& doc) const {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
      out << text;
      return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!(f << text)) throw IoError("cannot write " + out_path);
  }

  FiniteMetricSpace load(const std::string& path) const {
    std::optional<SpaceFormat> fmt;
    if (format == "json") fmt = SpaceFormat::Json;
    if (format == "csv") fmt = SpaceFormat::Csv;
    auto space = parse_space(path, fmt);
    log->info("{}: {} points", path, space.size());
    return space;
  }
};

void write_svg(const std::string& path, const FiniteMetricSpace& space, const Embedding& emb) {
  if (path.empty()) return;
  if (emb.dim > 2) throw std::invalid_argument("--svg needs dim <= 2");
  std::ofstream f(path, std::ios::binary);
  if (!(f << embedding_svg(space, emb))) throw IoError("cannot write " + path);
}

Json mnm_violation_json(const FiniteMetricSpace& space, const MnmViolation& v) {
  Json points = Json::array();
  for (auto p : v.points) points.push_back(space.label(p));
  return Json{{"kind", v.kind == MnmViolation::Kind::Mesh ? "mesh" : "separation"},
              {"blocks", v.blocks},
              {"points", std::move(points)}};
}

} // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Loose embeddings, obstructions and Gromov-Hausdorff distances of finite metric spaces",
               "loometric"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string out_path, format, svg_path;
  std::string input, input_b;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Write the JSON result to this file");
    sub->add_option("--format", format, "Input format (default: from the extension)")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto add_input = [&](CLI::App* sub) { sub->add_option("space", input, "Metric space file")->required(); };

  auto* validate = app.add_subcommand("validate", "Check the metric axioms");
  add_input(validate);
  add_common(validate);

  std::string tol;
  auto* pattern = app.add_subcommand("pattern", "Distance-equality classes");
  add_input(pattern);
  add_common(pattern);
  pattern->add_option("--tol", tol, "Merge distances closer than this");

  auto* simplex = app.add_subcommand("simplex", "Largest equidistant subset and dimension bound");
  add_input(simplex);
  add_common(simplex);

  auto* embed_line = app.add_subcommand("embed-line", "Loose embedding into the line (injective distances)");
  add_input(embed_line);
  add_common(embed_line);
  embed_line->add_option("--seed", seed);
  embed_line->add_option("--svg", svg_path, "Write an SVG scatter");

  std::size_t dim = 0, restarts = 16, iters = 3000, threads = 1, max_dim = 0;
  bool escalate = false;
  auto* embed = app.add_subcommand("embed", "Loose embedding into R^dim");
  add_input(embed);
  add_common(embed);
  embed->add_option("--dim", dim, "Target dimension")->required()->check(CLI::PositiveNumber);
  embed->add_flag("--escalate", escalate, "On failure retry with dim + 1, dim + 2, ...");
  embed->add_option("--max-dim", max_dim, "Largest dimension --escalate may reach (default: no cap)");
  embed->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  embed->add_option("--iters", iters)->check(CLI::PositiveNumber);
  embed->add_option("--threads", threads)->check(CLI::PositiveNumber);
  embed->add_option("--seed", seed);
  embed->add_option("--svg", svg_path, "Write an SVG scatter (dim <= 2)");

  std::string eps_text;
  auto* perturb = app.add_subcommand("perturb", "Nearby metric with pairwise distinct distances");
  add_input(perturb);
  add_common(perturb);
  perturb->add_option("--eps", eps_text, "Largest change per entry")->required();
  perturb->add_option("--seed", seed);

  std::uint64_t budget = 20'000'000;
  auto* gh = app.add_subcommand("gh", "Gromov-Hausdorff distance");
  gh->add_option("A", input, "First space")->required();
  gh->add_option("B", input_b, "Second space")->required();
  add_common(gh);
  gh->add_option("--budget", budget, "Branch-and-bound node budget");

  std::uint64_t n_inv = 1, m_inv = 1;
  std::string family_path;
  auto* mnm = app.add_subcommand("mnm", "Find or check a separated partition");
  add_input(mnm);
  add_common(mnm);
  mnm->add_option("--N", n_inv, "Mesh below 1/N")->required()->check(CLI::PositiveNumber);
  mnm->add_option("--M", m_inv, "Separation above 1/M")->required()->check(CLI::PositiveNumber);
  mnm->add_option("--partition", family_path, "Partition to check instead of searching");
  std::size_t exhaustive_limit = 10;
  mnm->add_option("--exhaustive-limit", exhaustive_limit, "Search all partitions of spaces up to this size");

  std::optional<std::size_t> check_dim;
  auto* cover = app.add_subcommand("cover-order", "Order of a cover");
  add_input(cover);
  add_common(cover);
  cover->add_option("--cover", family_path, "Cover file")->required();
  auto* check_dim_opt = cover->add_option("--check-dim", check_dim, "Check the dimension witness for order n");
  cover->add_option("--M", m_inv, "Separation above 1/M")->needs(check_dim_opt)->check(CLI::PositiveNumber);
  cover->add_option("--N", n_inv, "Mesh below 1/N (default 1)")->needs(check_dim_opt)->check(CLI::PositiveNumber);

  std::string thresholds;
  auto* strip = app.add_subcommand("strip", "Isolated-point stripping");
  add_input(strip);
  add_common(strip);
  strip->add_option("--thresholds", thresholds, "Comma-separated decreasing radii")->required();

  ExperimentParams params;
  std::string eps_exp = "1/1000", n_list = "1,2,4", m_list = "10,100,1000,10000";
  bool no_runtime = false;
  auto* experiment = app.add_subcommand("experiment", "Random perturbation and witness statistics");
  experiment->add_option("--out", out_path, "Write the JSON report to this file");
  experiment->add_option("--trials", params.trials)->check(CLI::PositiveNumber);
  experiment->add_option("--points", params.points)->check(CLI::Range(std::size_t{2}, std::size_t{64}));
  experiment->add_option("--ambient-dim", params.ambient_dim)->check(CLI::PositiveNumber);
  experiment->add_option("--eps", eps_exp);
  experiment->add_option("--seed", params.seed);
  experiment->add_option("--N", n_list, "Comma-separated N values");
  experiment->add_option("--M", m_list, "Comma-separated M values");
  experiment->add_flag("--no-runtime", no_runtime, "Omit runtime_ms (for byte-identical reports)");

  std::vector<std::string> argv_store{"loometric"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kUsage;
  }

  Context ctx{out, err, make_logger(err), out_path, format};
  const FiniteMetricSpace* current = nullptr;
  FiniteMetricSpace space;

  try {
    if (*validate) {
      try {
        space = ctx.load(input);
      } catch (const Error& e) {
        Json doc{{"valid", false}};
        doc.update(error_json(nullptr, e));
        ctx.emit(doc);
        return kNegative;
      }
      ctx.emit(Json{{"valid", true}, {"points", space.size()}});
      return kOk;
    }

    if (*experiment) {
      params.eps = parse_rational(eps_exp);
      params.n_grid = parse_u64_list(n_list);
      params.m_grid = parse_u64_list(m_list);
      const auto report = experiment_genericity(params);
      ctx.log->info("experiment: {} trials in {} ms", report.trials, report.runtime_ms);
      ctx.emit(report_json(report, !no_runtime));
      return kOk;
    }

    space = ctx.load(input);
    current = &space;

    if (*pattern) {
      std::optional<Rational> t;
      if (!tol.empty()) t = parse_rational(tol);
      ctx.emit(pattern_json(space, distance_pattern(space, t)));
      return kOk;
    }

    if (*simplex) {
      const auto w = max_regular_simplex(space);
      ctx.emit(simplex_json(space, w, dim_lower_bound(space)));
      return kOk;
    }

    if (*embed_line) {
      const auto injective = is_injective(space);
      if (!injective.injective) {
        const auto [a, b] = *injective.witness;
        ctx.emit(Json{{"error", "NotInjective"},
                      {"pairs", Json::array({Json::array({space.label(a.i), space.label(a.j)}),
                                             Json::array({space.label(b.i), space.label(b.j)})})},
                      {"witness", Json::array({a.i, a.j, b.i, b.j})}});
        return kNegative;
      }
      const auto emb = embed_line_branching(space, seed);
      write_svg(svg_path, space, emb);
      ctx.emit(embedding_json(space, emb));
      return emb.verified() ? kOk : kNegative;
    }

    if (*embed) {
      SolverOptions opts;
      opts.restarts = restarts;
      opts.max_iters = iters;
      opts.threads = threads;
      opts.seed = seed;
      // Escalation runs the solver up to n dimensions, then falls back to
      // the exact incidence construction if it fits under the cap.
      const std::size_t cap = escalate ? (max_dim ? std::max(dim, max_dim) : SIZE_MAX) : dim;
      SolveResult result = InfeasibleReport{};
      for (std::size_t d = dim; d <= std::min(cap, std::max(dim, space.size())); ++d) {
        result = solve_loose_embedding(space, d, opts);
        if (std::holds_alternative<Embedding>(result)) break;
        ctx.log->info("dim {}: no loose embedding found", d);
      }
      if (escalate && !std::holds_alternative<Embedding>(result)) {
        const auto exact = incidence_embedding(space);
        ctx.log->info("incidence construction needs dim {}", exact.dim);
        if (exact.dim <= cap && exact.dim > space.size()) result = solve_loose_embedding(space, exact.dim, opts);
      }
      if (const auto* emb = std::get_if<Embedding>(&result)) {
        if (emb->dim <= 2) write_svg(svg_path, space, *emb);
        else if (!svg_path.empty()) ctx.log->warn("--svg ignored: embedding has dim {}", emb->dim);
        ctx.emit(embedding_json(space, *emb));
        return kOk;
      }
      ctx.emit(infeasible_json(space, std::get<InfeasibleReport>(result)));
      return kNegative;
    }

    if (*perturb) {
      const auto perturbed = perturb_to_injective(space, parse_rational(eps_text), seed);
      ctx.emit(space_json(perturbed));
      return kOk;
    }

    if (*gh) {
      const auto y = ctx.load(input_b);
      const auto result = gh_exact(space, y, budget);
      ctx.log->info("gh: {} nodes, exact = {}", result.nodes, result.exact);
      ctx.emit(gh_json(result));
      return kOk;
    }

    if (*mnm) {
      if (!family_path.empty()) {
        const auto partition = parse_family_json(read_file(family_path), space);
        const auto check = check_mnm(space, partition, n_inv, m_inv);
        Json doc{{"holds", check.holds}, {"N", n_inv}, {"M", m_inv}};
        if (check.violation) doc["violation"] = mnm_violation_json(space, *check.violation);
        ctx.emit(doc);
        return check.holds ? kOk : kNegative;
      }
      const auto w = find_mnm_partition(space, n_inv, m_inv, exhaustive_limit);
      // A miss is conclusive only when the exhaustive stage ran.
      const std::string searched = w ? w->search_space
                                     : space.size() <= exhaustive_limit ? "exhaustive" : "dendrogram-cuts+two-block";
      Json doc{{"found", w.has_value()}, {"N", n_inv}, {"M", m_inv}, {"search_space", searched}};
      if (w) doc["blocks"] = family_json(space, w->blocks);
      ctx.emit(doc);
      return w ? kOk : kNegative;
    }

    if (*cover) {
      const auto family = parse_family_json(read_file(family_path), space);
      const int order = cover_order(space, family);
      Json doc{{"order", order}};
      if (!check_dim) {
        ctx.emit(doc);
        return kOk;
      }
      const auto check = check_dimension_witness(space, family, n_inv, m_inv, *check_dim);
      doc["dim"] = *check_dim;
      doc["N"] = n_inv;
      doc["M"] = m_inv;
      doc["holds"] = check.holds;
      if (check.violation) {
        const auto& v = *check.violation;
        Json points = Json::array();
        for (auto p : v.points) points.push_back(space.label(p));
        doc["violation"] = Json{{"kind", v.kind == DimensionViolation::Kind::Mesh ? "mesh" : "separation"},
                                {"members", v.members},
                                {"points", std::move(points)}};
      }
      ctx.emit(doc);
      return check.holds ? kOk : kNegative;
    }

    if (*strip) {
      std::vector<Rational> radii;
      std::size_t s = 0;
      while (s <= thresholds.size()) {
        std::size_t e = thresholds.find(',', s);
        if (e == std::string::npos) e = thresholds.size();
        radii.push_back(parse_rational(thresholds.substr(s, e - s)));
        s = e + 1;
      }
      ctx.emit(strip_json(space, isolation_strip(space, radii)));
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << error_json(current, e).dump() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  err << app.help();
  return kUsage;
}

} // namespace loometric
