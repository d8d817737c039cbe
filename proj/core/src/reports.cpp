#include "actionraid/reports.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "actionraid/stats.hpp"
#include "csv_format.hpp"

namespace actionraid {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using detail::format_double;

namespace {

constexpr int kManifestVersion = 1;

std::string budget_column(const AttackConfig& cfg) {
  switch (cfg.kind) {
    case AttackKind::Las: return format_double(cfg.B);
    case AttackKind::None: return "0";
    default: return format_double(cfg.b);
  }
}

std::string q_column(const AttackConfig& cfg) {
  return cfg.kind == AttackKind::Las ? std::string(to_string(cfg.q_temporal)) : std::string();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidInputError("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json attack_to_json(const AttackConfig& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["p"] = to_string(c.p_spatial);
  j["q"] = to_string(c.q_temporal);
  j["b"] = c.b;
  j["B"] = c.B;
  j["H"] = c.H;
  j["eta"] = c.eta;
  j["n_pgd_steps"] = c.n_pgd_steps;
  j["init_offset"] = c.init_offset;
  j["max_step_halvings"] = c.max_step_halvings;
  j["grad_method"] = to_string(c.grad_method);
  j["n_samples"] = c.sampled.n_samples;
  j["sigma"] = c.sampled.sigma;
  j["rollout_perturbed"] = c.rollout_perturbed;
  j["seed"] = c.seed;
  return j;
}

AttackConfig attack_from_json(const Json& j) {
  AttackConfig c;
  c.kind = parse_attack_kind(j.at("kind").get<std::string>());
  c.p_spatial = parse_norm_order(j.at("p").get<std::string>());
  c.q_temporal = parse_norm_order(j.at("q").get<std::string>());
  c.b = j.at("b").get<double>();
  c.B = j.at("B").get<double>();
  c.H = j.at("H").get<int>();
  c.eta = j.at("eta").get<double>();
  c.n_pgd_steps = j.at("n_pgd_steps").get<int>();
  c.init_offset = j.at("init_offset").get<double>();
  c.max_step_halvings = j.at("max_step_halvings").get<int>();
  c.grad_method = parse_gradient_method(j.at("grad_method").get<std::string>());
  c.sampled.n_samples = j.at("n_samples").get<int>();
  c.sampled.sigma = j.at("sigma").get<double>();
  c.rollout_perturbed = j.at("rollout_perturbed").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

Json stats_to_json(const CellStats& s) {
  Json j;
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["median"] = s.median;
  j["q1"] = s.q1;
  j["q3"] = s.q3;
  j["min"] = s.min;
  j["max"] = s.max;
  return j;
}

// Minimal CSV reading: no quoting, as none of the written fields need it.
std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view text, const std::string& where) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw FormatError(where + ": bad number '" + std::string(text) + "'");
  }
  return value;
}

class LineReader {
 public:
  LineReader(const fs::path& path) : name_(path.filename().string()) {
    if (!fs::exists(path)) throw FormatError("incomplete results: " + name_ + " missing");
    text_ = read_file(path);
  }

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    const std::size_t end = text_.find('\n', pos_);
    if (end == std::string::npos) throw FormatError(name_ + ": missing final newline");
    line = std::string_view(text_).substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_no_;
    return true;
  }

  std::string where() const { return name_ + ":" + std::to_string(line_no_); }

 private:
  std::string name_;
  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

std::string episodes_header() { return "episode_id,cell,seed,kind,p,q,B,H,cum_reward,length\n"; }

std::string steps_header(std::size_t m) {
  std::string h = "episode_id,t";
  for (std::size_t i = 0; i < m; ++i) h += ",delta_" + std::to_string(i);
  return h + ",delta_norm,reward\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// Tables

std::vector<AblationRow> ablation_table(const SweepResult& sweep) {
  const SweepCell* nominal = sweep.nominal();
  if (nominal == nullptr) throw InvalidInputError("ablation_table: sweep has no nominal cell");
  const double base = nominal->stats().mean;
  std::vector<AblationRow> rows;
  for (const auto& cell : sweep.cells) {
    if (cell.attack.kind == AttackKind::None) continue;
    const double mean = cell.stats().mean;
    rows.push_back({cell.id, cell.attack, mean, base, mean - base});
  }
  return rows;
}

std::vector<LasVsMasRow> las_vs_mas_table(const SweepResult& sweep) {
  const SweepCell* nominal = sweep.nominal();
  if (nominal == nullptr) throw InvalidInputError("las_vs_mas_table: sweep has no nominal cell");
  const double base = nominal->stats().mean;
  std::vector<LasVsMasRow> rows;
  for (const auto& cell : sweep.cells) {
    if (cell.attack.kind != AttackKind::Las) continue;
    AttackConfig mas = cell.attack;
    mas.kind = AttackKind::Mas;
    mas.b = cell.attack.B / cell.attack.H;
    const SweepCell* paired = sweep.find(cell_id(mas));
    if (paired == nullptr) continue;
    LasVsMasRow row;
    row.las_cell = cell.id;
    row.mas_cell = paired->id;
    row.p_spatial = cell.attack.p_spatial;
    row.q_temporal = cell.attack.q_temporal;
    row.B = cell.attack.B;
    row.H = cell.attack.H;
    row.las_reduction = cell.stats().mean - base;
    row.mas_reduction = paired->stats().mean - base;
    row.las_minus_mas = row.las_reduction - row.mas_reduction;
    rows.push_back(row);
  }
  return rows;
}

std::vector<DimensionRow> dimension_report(const std::vector<EpisodeSummary>& episodes) {
  std::vector<DimensionRow> rows;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const auto& e = episodes[i];
    rows.push_back({i, e.seed, e.per_dimension_attack, e.per_dimension_attack.sum()});
  }
  return rows;
}

std::vector<DimensionRow> dimension_report(const std::vector<EpisodeRecord>& records) {
  std::vector<EpisodeSummary> s;
  for (const auto& r : records) s.push_back(summarize(r));
  return dimension_report(s);
}

std::vector<TraceRow> delta_trace_report(const std::vector<EpisodeSummary>& episodes) {
  std::vector<TraceRow> rows;
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    const auto& norms = episodes[i].delta_norms;
    for (std::size_t t = 0; t < norms.size(); ++t) rows.push_back({i, t, norms[t]});
  }
  return rows;
}

std::vector<TraceRow> delta_trace_report(const std::vector<EpisodeRecord>& records) {
  std::vector<EpisodeSummary> s;
  for (const auto& r : records) s.push_back(summarize(r));
  return delta_trace_report(s);
}

double median_trace_gini(const std::vector<EpisodeSummary>& episodes) {
  if (episodes.empty()) return 0.0;
  std::vector<double> g;
  g.reserve(episodes.size());
  for (const auto& e : episodes) g.push_back(stats::gini(e.delta_norms));
  return stats::median(g);
}

// ---------------------------------------------------------------------------
// Writers

StepsCsvWriter::StepsCsvWriter(const fs::path& path, std::size_t action_dim)
    : out_(path, std::ios::binary | std::ios::trunc), action_dim_(action_dim) {
  if (!out_) throw InvalidInputError("cannot write " + path.string());
  out_ << steps_header(action_dim_);
}

void StepsCsvWriter::write(std::size_t episode_id, const EpisodeRecord& record) {
  std::string line;
  for (std::size_t t = 0; t < record.steps.size(); ++t) {
    const auto& s = record.steps[t];
    line.clear();
    line += std::to_string(episode_id);
    line += ',';
    line += std::to_string(t);
    for (Eigen::Index i = 0; i < s.delta.size(); ++i) {
      line += ',';
      line += format_double(s.delta[i]);
    }
    line += ',';
    line += format_double(s.delta_norm);
    line += ',';
    line += format_double(s.reward);
    line += '\n';
    out_ << line;
  }
  if (!out_) throw InvalidInputError("failed writing steps.csv");
}

void write_sweep_raw(const fs::path& dir, const SweepResult& sweep) {
  fs::create_directories(dir);
  Json manifest;
  manifest["schema_version"] = kManifestVersion;
  manifest["env"] = sweep.env_name;
  manifest["agent"] = sweep.agent_id;
  manifest["action_dim"] = sweep.action_dim;
  manifest["n_episodes"] = sweep.n_episodes;
  manifest["base_seed"] = sweep.base_seed;
  Json cells = Json::array();
  for (const auto& c : sweep.cells) {
    Json cj;
    cj["id"] = c.id;
    cj["attack"] = attack_to_json(c.attack);
    cells.push_back(std::move(cj));
  }
  manifest["cells"] = std::move(cells);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  std::string csv = episodes_header();
  for (std::size_t ci = 0; ci < sweep.cells.size(); ++ci) {
    const auto& c = sweep.cells[ci];
    for (std::size_t i = 0; i < c.episodes.size(); ++i) {
      const auto& e = c.episodes[i];
      csv += std::to_string(episode_id(ci, i, sweep.n_episodes)) + ',' + c.id + ',' +
             std::to_string(e.seed) + ',' + std::string(to_string(c.attack.kind)) + ',' +
             std::string(to_string(c.attack.p_spatial)) + ',' + q_column(c.attack) + ',' +
             budget_column(c.attack) + ',' + std::to_string(c.attack.H) + ',' +
             format_double(e.cumulative_reward) + ',' + std::to_string(e.length) + '\n';
    }
  }
  write_file(dir / "episodes.csv", csv);
}

void write_report(const fs::path& dir, const SweepResult& sweep) {
  fs::create_directories(dir);
  const auto ablation = ablation_table(sweep);
  const auto pairs = las_vs_mas_table(sweep);

  Json summary;
  summary["schema_version"] = kManifestVersion;
  summary["env"] = sweep.env_name;
  summary["agent"] = sweep.agent_id;
  summary["n_episodes"] = sweep.n_episodes;
  summary["base_seed"] = sweep.base_seed;

  std::string cell_csv = "cell,kind,p,q,B,H,n,mean,std,median,q1,q3,min,max,median_trace_gini\n";
  Json cells = Json::array();
  for (const auto& c : sweep.cells) {
    const CellStats st = c.stats();
    const double gini = median_trace_gini(c.episodes);
    Json cj;
    cj["id"] = c.id;
    cj["kind"] = to_string(c.attack.kind);
    cj["p"] = to_string(c.attack.p_spatial);
    if (c.attack.kind == AttackKind::Las) cj["q"] = to_string(c.attack.q_temporal);
    cj["budget"] = c.budget();
    cj["H"] = c.attack.H;
    cj["stats"] = stats_to_json(st);
    cj["median_trace_gini"] = gini;
    cells.push_back(std::move(cj));
    cell_csv += c.id + ',' + std::string(to_string(c.attack.kind)) + ',' +
                std::string(to_string(c.attack.p_spatial)) + ',' + q_column(c.attack) + ',' +
                budget_column(c.attack) + ',' + std::to_string(c.attack.H) + ',' +
                std::to_string(st.n) + ',' + format_double(st.mean) + ',' +
                format_double(st.std) + ',' + format_double(st.median) + ',' +
                format_double(st.q1) + ',' + format_double(st.q3) + ',' + format_double(st.min) +
                ',' + format_double(st.max) + ',' + format_double(gini) + '\n';
  }
  summary["cells"] = std::move(cells);

  std::string ablation_csv = "cell,kind,p,q,B,H,mean,nominal_mean,difference\n";
  Json aj = Json::array();
  for (const auto& r : ablation) {
    Json j;
    j["cell"] = r.cell;
    j["mean"] = r.mean;
    j["nominal_mean"] = r.nominal_mean;
    j["difference"] = r.difference;
    aj.push_back(std::move(j));
    ablation_csv += r.cell + ',' + std::string(to_string(r.attack.kind)) + ',' +
                    std::string(to_string(r.attack.p_spatial)) + ',' + q_column(r.attack) + ',' +
                    budget_column(r.attack) + ',' + std::to_string(r.attack.H) + ',' +
                    format_double(r.mean) + ',' + format_double(r.nominal_mean) + ',' +
                    format_double(r.difference) + '\n';
  }
  summary["ablation"] = std::move(aj);

  std::string pair_csv = "las_cell,mas_cell,p,q,B,H,las_reduction,mas_reduction,las_minus_mas\n";
  Json pj = Json::array();
  std::size_t not_worse = 0;
  for (const auto& r : pairs) {
    Json j;
    j["las_cell"] = r.las_cell;
    j["mas_cell"] = r.mas_cell;
    j["las_reduction"] = r.las_reduction;
    j["mas_reduction"] = r.mas_reduction;
    j["las_minus_mas"] = r.las_minus_mas;
    pj.push_back(std::move(j));
    if (r.las_minus_mas <= 0.0) ++not_worse;
    pair_csv += r.las_cell + ',' + r.mas_cell + ',' + std::string(to_string(r.p_spatial)) + ',' +
                std::string(to_string(r.q_temporal)) + ',' + format_double(r.B) + ',' +
                std::to_string(r.H) + ',' + format_double(r.las_reduction) + ',' +
                format_double(r.mas_reduction) + ',' + format_double(r.las_minus_mas) + '\n';
  }
  summary["las_vs_mas"] = std::move(pj);
  summary["las_not_worse_fraction"] =
      pairs.empty() ? 0.0 : static_cast<double>(not_worse) / static_cast<double>(pairs.size());

  std::string dims_csv = "episode_id,cell,seed";
  for (std::size_t i = 0; i < sweep.action_dim; ++i) dims_csv += ",dim_" + std::to_string(i);
  dims_csv += ",total\n";
  std::string traces_csv = "episode_id,cell,t,delta_norm\n";
  for (std::size_t ci = 0; ci < sweep.cells.size(); ++ci) {
    const auto& c = sweep.cells[ci];
    if (c.attack.kind == AttackKind::None) continue;
    for (const auto& row : dimension_report(c.episodes)) {
      dims_csv += std::to_string(episode_id(ci, row.episode, sweep.n_episodes)) + ',' + c.id + ',' +
                  std::to_string(row.seed);
      for (Eigen::Index i = 0; i < row.per_dimension.size(); ++i) {
        dims_csv += ',' + format_double(row.per_dimension[i]);
      }
      dims_csv += ',' + format_double(row.total) + '\n';
    }
    if (c.attack.kind != AttackKind::Las) continue;
    for (const auto& row : delta_trace_report(c.episodes)) {
      traces_csv += std::to_string(episode_id(ci, row.episode, sweep.n_episodes)) + ',' + c.id +
                    ',' + std::to_string(row.t) + ',' + format_double(row.delta_norm) + '\n';
    }
  }

  std::string gp =
      "# gnuplot script for the tables in this directory: gnuplot plots.gp\n"
      "set datafile separator ','\n"
      "set terminal pngcairo size 1400,700\n"
      "set key autotitle columnhead\n"
      "set xtics rotate by -60 font ',8'\n"
      "set style fill solid 0.3\n"
      "\n"
      "set output 'rewards.png'\n"
      "set ylabel 'cumulative reward'\n"
      "plot 'cell_stats.csv' using 0:'q1':'min':'max':'q3':xticlabels(1) with candlesticks "
      "whiskerbars notitle, \\\n"
      "     '' using 0:'median':'median':'median':'median' with candlesticks lt -1 notitle\n"
      "\n"
      "set output 'dims.png'\n"
      "set ylabel 'sum over steps of |delta_i|'\n"
      "set style data histograms\n"
      "set style histogram rowstacked\n"
      "set xtics format ''\n"
      "plot for [i=4:" +
      std::to_string(3 + sweep.action_dim) +
      "] 'dims.csv' using i title columnhead(i)\n"
      "\n"
      "set output 'traces.png'\n"
      "set style data lines\n"
      "set xlabel 'step'\n"
      "set ylabel '||delta||'\n"
      "plot 'traces.csv' using 3:4 with lines notitle\n";

  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_file(dir / "cell_stats.csv", cell_csv);
  write_file(dir / "ablation.csv", ablation_csv);
  write_file(dir / "las_vs_mas.csv", pair_csv);
  write_file(dir / "dims.csv", dims_csv);
  write_file(dir / "traces.csv", traces_csv);
  write_file(dir / "plots.gp", gp);
}

// ---------------------------------------------------------------------------
// Loading

SweepResult load_sweep_result(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw InvalidInputError("no sweep results in " + dir.string() + " (manifest.json missing)");
  }
  SweepResult sweep;
  try {
    const Json manifest = Json::parse(read_file(manifest_path));
    if (manifest.at("schema_version").get<int>() != kManifestVersion) {
      throw FormatError("manifest.json: unsupported schema_version");
    }
    sweep.env_name = manifest.at("env").get<std::string>();
    sweep.agent_id = manifest.at("agent").get<std::string>();
    sweep.action_dim = manifest.at("action_dim").get<std::size_t>();
    sweep.n_episodes = manifest.at("n_episodes").get<int>();
    sweep.base_seed = manifest.at("base_seed").get<std::uint64_t>();
    for (const auto& cj : manifest.at("cells")) {
      SweepCell cell{cj.at("id").get<std::string>(), attack_from_json(cj.at("attack")), {}};
      cell.episodes.resize(static_cast<std::size_t>(sweep.n_episodes));
      sweep.cells.push_back(std::move(cell));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest.json: ") + e.what());
  }
  if (sweep.n_episodes < 1 || sweep.action_dim < 1 || sweep.cells.empty()) {
    throw FormatError("manifest.json: empty sweep");
  }

  const std::size_t n = static_cast<std::size_t>(sweep.n_episodes);
  const std::size_t total = sweep.cells.size() * n;
  std::vector<bool> seen(total, false);
  std::string_view line;

  LineReader episodes(dir / "episodes.csv");
  if (!episodes.next(line) || std::string(line) + "\n" != episodes_header()) {
    throw FormatError("episodes.csv: unexpected header");
  }
  while (episodes.next(line)) {
    const auto f = split(line);
    if (f.size() != 10) throw FormatError(episodes.where() + ": expected 10 fields");
    const auto id = parse_number<std::size_t>(f[0], episodes.where());
    if (id >= total) throw FormatError(episodes.where() + ": episode id out of range");
    auto& cell = sweep.cells[id / n];
    if (f[1] != cell.id) throw FormatError(episodes.where() + ": cell does not match manifest");
    auto& e = cell.episodes[id % n];
    e.seed = parse_number<std::uint64_t>(f[2], episodes.where());
    e.cumulative_reward = parse_number<double>(f[8], episodes.where());
    e.length = parse_number<std::size_t>(f[9], episodes.where());
    e.per_dimension_attack = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sweep.action_dim));
    e.delta_norms.reserve(e.length);
    seen[id] = true;
  }
  for (std::size_t i = 0; i < total; ++i) {
    if (!seen[i]) throw FormatError("episodes.csv: episode " + std::to_string(i) + " missing");
  }

  LineReader steps(dir / "steps.csv");
  if (!steps.next(line) || std::string(line) + "\n" != steps_header(sweep.action_dim)) {
    throw FormatError("steps.csv: unexpected header");
  }
  const std::size_t m = sweep.action_dim;
  while (steps.next(line)) {
    const auto f = split(line);
    if (f.size() != m + 4) throw FormatError(steps.where() + ": wrong field count");
    const auto id = parse_number<std::size_t>(f[0], steps.where());
    if (id >= total) throw FormatError(steps.where() + ": episode id out of range");
    auto& e = sweep.cells[id / n].episodes[id % n];
    const auto t = parse_number<std::size_t>(f[1], steps.where());
    if (t != e.delta_norms.size()) throw FormatError(steps.where() + ": steps out of order");
    for (std::size_t i = 0; i < m; ++i) {
      e.per_dimension_attack[static_cast<Eigen::Index>(i)] +=
          std::abs(parse_number<double>(f[2 + i], steps.where()));
    }
    e.delta_norms.push_back(parse_number<double>(f[2 + m], steps.where()));
  }
  for (const auto& c : sweep.cells) {
    for (const auto& e : c.episodes) {
      if (e.delta_norms.size() != e.length) {
        throw FormatError("steps.csv: step count disagrees with episodes.csv for cell " + c.id);
      }
    }
  }
  return sweep;
}

}  // namespace actionraid
