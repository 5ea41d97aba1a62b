#include "decbandit/scenario_file.hpp"

#include "decbandit/analysis.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

namespace decbandit {

namespace fs = std::filesystem;

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(line == 0 ? source + ": " + message : source + ":" + std::to_string(line) + ": " + message),
      line_(line)
{
}

std::string format_double(double value)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

namespace {

const std::set<std::string, std::less<>> kKeys = {
    "name",        "family",       "means",          "noise_sd",    "n_agents",    "topology",
    "topology_k",  "grid_rows",    "grid_cols",      "edges",       "edge_file",   "schedule",
    "fail_prob",   "policy",       "eta",            "quantile_c",  "horizon",     "n_runs",
    "seed",        "output",       "per_run_output", "record_every", "regret",     "prior_alpha",
    "prior_beta",  "prior_mean",   "prior_sd",       "prior_precision", "epsilon",
};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    std::size_t line = 0;
};

class Document {
public:
    Document(std::string_view text, std::string source) : source_(std::move(source))
    {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            last_line_ = line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw ConfigError(source_, line_no, "expected 'key = value'");
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) {
                throw ConfigError(source_, line_no, "missing key before '='");
            }
            if (!kKeys.contains(key)) {
                throw ConfigError(source_, line_no, "unknown key '" + key + "'");
            }
            if (value.empty()) {
                throw ConfigError(source_, line_no, "missing value for '" + key + "'");
            }
            if (const auto it = entries_.find(key); it != entries_.end()) {
                throw ConfigError(source_, line_no,
                                  "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) +
                                      ")");
            }
            entries_.emplace(key, Entry{value, line_no});
        }
    }

    bool has(const std::string& key) const { return entries_.contains(key); }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const
    {
        const auto it = entries_.find(key);
        throw ConfigError(source_, it == entries_.end() ? 0 : it->second.line, message);
    }

    const std::string& source() const { return source_; }

    std::optional<std::string> text(const std::string& key) const
    {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second.value;
    }

    std::string required_text(const std::string& key) const
    {
        auto v = text(key);
        if (!v) throw ConfigError(source_, 0, "missing required key '" + key + "'");
        return *v;
    }

    std::optional<double> real(const std::string& key) const
    {
        const auto v = text(key);
        if (!v) return std::nullopt;
        return parse_real(key, *v);
    }

    double real_or(const std::string& key, double fallback) const { return real(key).value_or(fallback); }

    std::optional<std::uint64_t> integer(const std::string& key) const
    {
        const auto v = text(key);
        if (!v) return std::nullopt;
        std::uint64_t out = 0;
        const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
        if (res.ec != std::errc() || res.ptr != v->data() + v->size()) {
            fail(key, "'" + key + "' expects a non-negative integer, got '" + *v + "'");
        }
        return out;
    }

    std::size_t size_or(const std::string& key, std::size_t fallback) const
    {
        return static_cast<std::size_t>(integer(key).value_or(fallback));
    }

    std::size_t required_size(const std::string& key) const
    {
        const auto v = integer(key);
        if (!v) throw ConfigError(source_, 0, "missing required key '" + key + "'");
        return static_cast<std::size_t>(*v);
    }

    std::vector<std::string> list(const std::string& key) const
    {
        const std::string v = required_text(key);
        if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
            fail(key, "'" + key + "' expects a bracketed list like [a, b]");
        }
        std::vector<std::string> items;
        std::string_view body = trim(std::string_view(v).substr(1, v.size() - 2));
        if (body.empty()) return items;
        std::size_t pos = 0;
        while (pos <= body.size()) {
            auto comma = body.find(',', pos);
            if (comma == std::string_view::npos) comma = body.size();
            const auto item = trim(body.substr(pos, comma - pos));
            if (item.empty()) fail(key, "empty item in list '" + key + "'");
            items.emplace_back(item);
            pos = comma + 1;
        }
        return items;
    }

    std::vector<double> real_list(const std::string& key) const
    {
        std::vector<double> out;
        for (const std::string& item : list(key)) {
            const auto star = item.find('*');
            if (star == std::string::npos) {
                out.push_back(parse_real(key, item));
                continue;
            }
            const double value = parse_real(key, std::string(trim(std::string_view(item).substr(0, star))));
            const std::string count_text(trim(std::string_view(item).substr(star + 1)));
            std::size_t count = 0;
            const auto res = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
            if (res.ec != std::errc() || res.ptr != count_text.data() + count_text.size() || count == 0) {
                fail(key, "bad repeat count in '" + item + "'");
            }
            out.insert(out.end(), count, value);
        }
        return out;
    }

private:
    double parse_real(const std::string& key, const std::string& v) const
    {
        double out = 0.0;
        const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out)) {
            fail(key, "'" + key + "' expects a number, got '" + v + "'");
        }
        return out;
    }

    std::string source_;
    std::map<std::string, Entry, std::less<>> entries_;
    std::size_t last_line_ = 0;
};

template <class F>
auto anchored(const Document& doc, const std::string& key, F&& build)
{
    try {
        return build();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        doc.fail(key, e.what());
    }
}

bool is_decentralized(PolicyKind kind)
{
    return kind == PolicyKind::dec_thompson || kind == PolicyKind::dec_bayes_ucb;
}

std::string_view schedule_name(ScheduleKind kind)
{
    switch (kind) {
    case ScheduleKind::static_matrix:
        return "static";
    case ScheduleKind::gossip:
        return "gossip";
    case ScheduleKind::link_failure:
        return "link_failure";
    }
    return "unknown";
}

std::string_view topology_name(Topology::Kind kind)
{
    switch (kind) {
    case Topology::Kind::complete:
        return "complete";
    case Topology::Kind::cycle:
        return "cycle";
    case Topology::Kind::k_regular:
        return "kregular";
    case Topology::Kind::grid:
        return "grid";
    case Topology::Kind::custom:
        return "custom";
    }
    return "unknown";
}

void check_plain(const Document& doc, const std::string& key, const std::string& value)
{
    if (value.find_first_of("#\n") != std::string::npos) {
        doc.fail(key, "'" + key + "' must not contain '#' or a newline");
    }
}

std::vector<Edge> parse_edges(const Document& doc)
{
    std::vector<Edge> edges;
    for (const std::string& item : doc.list("edges")) {
        const auto dash = item.find('-');
        std::size_t u = 0;
        std::size_t v = 0;
        bool ok = dash != std::string::npos;
        if (ok) {
            const auto a = trim(std::string_view(item).substr(0, dash));
            const auto b = trim(std::string_view(item).substr(dash + 1));
            const auto ra = std::from_chars(a.data(), a.data() + a.size(), u);
            const auto rb = std::from_chars(b.data(), b.data() + b.size(), v);
            ok = ra.ec == std::errc() && ra.ptr == a.data() + a.size() && rb.ec == std::errc() &&
                 rb.ptr == b.data() + b.size();
        }
        if (!ok) doc.fail("edges", "edge '" + item + "' is not of the form u-v");
        edges.push_back({u, v});
    }
    return edges;
}

Topology parse_topology(const Document& doc, std::size_t& n_agents, const fs::path& base_dir)
{
    const std::string kind = doc.text("topology").value_or("complete");
    const auto need_n = [&]() {
        if (!doc.has("n_agents")) throw ConfigError(doc.source(), 0, "missing required key 'n_agents'");
        return n_agents;
    };
    return anchored(doc, "topology", [&]() -> Topology {
        if (kind == "complete") return Topology::complete(need_n());
        if (kind == "cycle") return Topology::cycle(need_n());
        if (kind == "kregular") {
            if (!doc.has("topology_k")) throw ConfigError(doc.source(), 0, "kregular topology needs 'topology_k'");
            return Topology::k_regular(need_n(), doc.required_size("topology_k"));
        }
        if (kind == "grid") {
            const std::size_t rows = doc.required_size("grid_rows");
            const std::size_t cols = doc.required_size("grid_cols");
            if (doc.has("n_agents") && n_agents != rows * cols) {
                doc.fail("n_agents", "n_agents = " + std::to_string(n_agents) + " but the grid has " +
                                         std::to_string(rows * cols) + " agents");
            }
            n_agents = rows * cols;
            return Topology::grid(rows, cols);
        }
        if (kind == "custom") {
            if (doc.has("edges") == doc.has("edge_file")) {
                doc.fail("topology", "custom topology needs exactly one of 'edges' or 'edge_file'");
            }
            if (doc.has("edges")) return Topology::custom(need_n(), parse_edges(doc));
            fs::path file = doc.required_text("edge_file");
            if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
            return anchored(doc, "edge_file", [&] { return Topology::from_edge_file(file, need_n()); });
        }
        doc.fail("topology", "unknown topology '" + kind + "' (complete, cycle, kregular, grid, custom)");
    });
}

} // namespace

ScenarioFile parse_scenario(std::string_view text, const std::string& source, const fs::path& base_dir)
{
    const Document doc(text, source);
    ScenarioFile file;
    Scenario& s = file.scenario;

    const std::string stem = fs::path(source).stem().string();
    s.name = doc.text("name").value_or(stem.empty() ? "scenario" : stem);
    check_plain(doc, "name", s.name);

    const std::string family = doc.text("family").value_or("bernoulli");
    const std::vector<double> means = doc.real_list("means");
    if (family == "bernoulli") {
        if (doc.has("noise_sd")) doc.fail("noise_sd", "noise_sd applies to gaussian arms only");
        s.instance = anchored(doc, "means", [&] { return BanditInstance::bernoulli(means); });
    } else if (family == "gaussian") {
        const double sd = doc.real_or("noise_sd", 1.0);
        s.instance = anchored(doc, doc.has("noise_sd") ? "noise_sd" : "means",
                              [&] { return BanditInstance::gaussian(means, sd); });
    } else {
        doc.fail("family", "unknown family '" + family + "' (bernoulli, gaussian)");
    }

    std::size_t n_agents = doc.size_or("n_agents", 0);
    if (doc.has("n_agents") && n_agents == 0) doc.fail("n_agents", "n_agents must be positive");
    s.schedule.topology = parse_topology(doc, n_agents, base_dir);
    s.n_agents = n_agents;
    for (const char* key : {"topology_k", "grid_rows", "grid_cols", "edges", "edge_file"}) {
        const Topology::Kind kind = s.schedule.topology.kind();
        const std::string k = key;
        const bool used = (k == "topology_k" && kind == Topology::Kind::k_regular) ||
                          ((k == "grid_rows" || k == "grid_cols") && kind == Topology::Kind::grid) ||
                          ((k == "edges" || k == "edge_file") && kind == Topology::Kind::custom);
        if (doc.has(k) && !used) doc.fail(k, "'" + k + "' does not apply to this topology");
    }

    const std::string schedule = doc.text("schedule").value_or("static");
    if (schedule == "static") {
        s.schedule.kind = ScheduleKind::static_matrix;
    } else if (schedule == "gossip") {
        s.schedule.kind = ScheduleKind::gossip;
    } else if (schedule == "link_failure") {
        s.schedule.kind = ScheduleKind::link_failure;
        if (!doc.has("fail_prob")) doc.fail("schedule", "link_failure schedule needs 'fail_prob'");
        s.schedule.fail_prob = *doc.real("fail_prob");
    } else {
        doc.fail("schedule", "unknown schedule '" + schedule + "' (static, gossip, link_failure)");
    }
    if (doc.has("fail_prob") && s.schedule.kind != ScheduleKind::link_failure) {
        doc.fail("fail_prob", "fail_prob applies to link_failure schedules only");
    }

    const std::string policy = doc.text("policy").value_or("dec_ts");
    const auto kind = parse_policy_kind(policy);
    if (!kind) {
        doc.fail("policy", "unknown policy '" + policy + "' (dec_ts, dec_bayes_ucb, isolated_ts, centralized_ts)");
    }
    s.policy.kind = *kind;
    s.policy.eta = doc.real_or("eta", is_decentralized(*kind) ? static_cast<double>(n_agents) : 1.0);
    s.policy.quantile_c = doc.real_or("quantile_c", 0.0);
    if (!doc.has("horizon")) throw ConfigError(source, 0, "missing required key 'horizon'");
    s.set_horizon(doc.required_size("horizon"));

    s.n_runs = doc.size_or("n_runs", kPresetRuns);
    s.master_seed = doc.integer("seed").value_or(1);
    s.record_every = doc.size_or("record_every", 1);

    const std::string regret = doc.text("regret").value_or("pseudo");
    if (regret == "pseudo") {
        s.regret = RegretMode::pseudo;
    } else if (regret == "realized") {
        s.regret = RegretMode::realized;
    } else {
        doc.fail("regret", "unknown regret mode '" + regret + "' (pseudo, realized)");
    }

    s.priors.beta.alpha = doc.real_or("prior_alpha", 1.0);
    s.priors.beta.beta = doc.real_or("prior_beta", 1.0);
    s.priors.gaussian.mean = doc.real_or("prior_mean", 0.0);
    if (doc.has("prior_sd") && doc.has("prior_precision")) {
        doc.fail("prior_precision", "set prior_sd or prior_precision, not both");
    }
    if (doc.has("prior_sd")) {
        const double sd = *doc.real("prior_sd");
        if (!(sd > 0.0)) doc.fail("prior_sd", "prior_sd must be positive");
        s.priors.gaussian.precision = 1.0 / (sd * sd);
    } else {
        s.priors.gaussian.precision = doc.real_or("prior_precision", 1.0);
    }

    file.epsilon = doc.real_or("epsilon", 1.0);
    if (!(file.epsilon > 0.0)) doc.fail("epsilon", "epsilon must be positive");

    const std::string output = doc.text("output").value_or(s.name + ".csv");
    check_plain(doc, "output", output);
    file.output = output;
    if (const auto per_run = doc.text("per_run_output")) {
        check_plain(doc, "per_run_output", *per_run);
        file.per_run_output = *per_run;
    }
    s.keep_runs = file.per_run_output.has_value();

    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source, 0, e.what());
    }
    return file;
}

ScenarioFile load_scenario(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path.string(), 0, "cannot open file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path.string(), path.parent_path());
}

std::string serialize_scenario(const ScenarioFile& file)
{
    const Scenario& s = file.scenario;
    std::ostringstream out;
    const auto list = [](const std::vector<double>& values) {
        std::string text = "[";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i > 0) text += ", ";
            text += format_double(values[i]);
        }
        return text + "]";
    };

    out << "name = " << s.name << '\n';
    out << "family = " << to_string(s.instance.family()) << '\n';
    out << "means = " << list(s.instance.means()) << '\n';
    if (s.instance.family() == RewardFamily::gaussian) out << "noise_sd = " << format_double(s.instance.noise_sd()) << '\n';

    const Topology& topo = s.schedule.topology;
    out << "n_agents = " << s.n_agents << '\n';
    out << "topology = " << topology_name(topo.kind()) << '\n';
    switch (topo.kind()) {
    case Topology::Kind::k_regular:
        out << "topology_k = " << topo.k() << '\n';
        break;
    case Topology::Kind::grid:
        out << "grid_rows = " << topo.rows() << "\ngrid_cols = " << topo.cols() << '\n';
        break;
    case Topology::Kind::custom: {
        out << "edges = [";
        for (std::size_t e = 0; e < topo.edges().size(); ++e) {
            out << (e > 0 ? ", " : "") << topo.edges()[e].u << '-' << topo.edges()[e].v;
        }
        out << "]\n";
        break;
    }
    case Topology::Kind::complete:
    case Topology::Kind::cycle:
        break;
    }
    out << "schedule = " << schedule_name(s.schedule.kind) << '\n';
    if (s.schedule.kind == ScheduleKind::link_failure) out << "fail_prob = " << format_double(s.schedule.fail_prob) << '\n';

    out << "policy = " << to_string(s.policy.kind) << '\n';
    out << "eta = " << format_double(s.policy.eta) << '\n';
    out << "quantile_c = " << format_double(s.policy.quantile_c) << '\n';
    out << "horizon = " << s.horizon << '\n';
    out << "n_runs = " << s.n_runs << '\n';
    out << "seed = " << s.master_seed << '\n';
    out << "record_every = " << s.record_every << '\n';
    out << "regret = " << to_string(s.regret) << '\n';
    out << "prior_alpha = " << format_double(s.priors.beta.alpha) << '\n';
    out << "prior_beta = " << format_double(s.priors.beta.beta) << '\n';
    out << "prior_mean = " << format_double(s.priors.gaussian.mean) << '\n';
    out << "prior_precision = " << format_double(s.priors.gaussian.precision) << '\n';
    out << "epsilon = " << format_double(file.epsilon) << '\n';
    out << "output = " << file.output.string() << '\n';
    if (file.per_run_output) out << "per_run_output = " << file.per_run_output->string() << '\n';
    return out.str();
}

// ------------------------------------------------------------------ presets

namespace {

constexpr std::array<std::size_t, 5> kAgentCounts = {36, 64, 81, 100, 144};
constexpr std::array<double, 3> kFailProbs = {0.3, 0.8, 0.9};

std::vector<double> seventeen_arms()
{
    std::vector<double> means(17, 0.1);
    means[0] = 0.5;
    return means;
}

struct PresetBuilder {
    const PresetOptions& options;
    std::uint64_t seed;
    std::size_t runs;
    std::size_t horizon;

    explicit PresetBuilder(const PresetOptions& o)
        : options(o),
          seed(o.seed.value_or(kPresetSeed)),
          runs(o.runs.value_or(kPresetRuns)),
          horizon(o.horizon.value_or(kPresetHorizon))
    {
    }

    ScenarioFile make(const std::string& name, BanditInstance instance, Topology topology, PolicyKind policy,
                      ScheduleKind schedule = ScheduleKind::static_matrix, double fail_prob = 0.0) const
    {
        ScenarioFile f;
        Scenario& s = f.scenario;
        s.name = name;
        s.instance = std::move(instance);
        s.n_agents = topology.size();
        s.schedule = {schedule, std::move(topology), fail_prob};
        s.policy.kind = policy;
        s.policy.eta = is_decentralized(policy) ? static_cast<double>(s.n_agents) : 1.0;
        s.set_horizon(horizon);
        s.n_runs = runs;
        s.master_seed = seed;
        f.output = options.out_dir / (name + ".csv");
        s.validate();
        return f;
    }
};

std::string prob_label(double p)
{
    return format_double(p);
}

} // namespace

std::vector<PresetInfo> presets()
{
    return {
        {"fig1_cycle", "100-agent cycle, 17 Gaussian arms {0.5, 0.1 x 16}, sd 1: dec-TS vs isolated TS"},
        {"fig1_grid", "10 x 10 grid, 17 Gaussian arms {0.5, 0.1 x 16}, sd 1: dec-TS vs isolated TS"},
        {"fig2_cycle20", "20-agent cycle, 20 Gaussian arms with uniform random means, sd 1: dec-TS vs dec-Bayes-UCB"},
        {"fig3_topology", "64 agents, 17 Bernoulli arms: complete, 5-regular, 3-regular and 8 x 8 grid"},
        {"fig4_complete", "complete graph, 17 Bernoulli arms, N in {36, 64, 81, 100, 144}"},
        {"fig4_cycle", "cycle graph, 17 Bernoulli arms, N in {36, 64, 81, 100, 144}"},
        {"fig5_gossip", "64 agents, 17 Gaussian arms: random pairwise gossip vs static complete graph"},
        {"fig5_linkfail", "64-agent complete graph, 17 Gaussian arms, link failure probability in {0.3, 0.8, 0.9}"},
    };
}

std::vector<ScenarioFile> expand_preset(std::string_view name, const PresetOptions& options)
{
    const PresetBuilder b(options);
    const auto gauss17 = BanditInstance::gaussian(seventeen_arms(), 1.0);
    const auto bern17 = BanditInstance::bernoulli(seventeen_arms());
    std::vector<ScenarioFile> out;

    if (name == "fig1_cycle" || name == "fig1_grid") {
        const std::string base(name);
        const Topology topo = name == "fig1_cycle" ? Topology::cycle(100) : Topology::grid(10, 10);
        out.push_back(b.make(base + "_dec_ts", gauss17, topo, PolicyKind::dec_thompson));
        out.push_back(b.make(base + "_isolated_ts", gauss17, topo, PolicyKind::isolated_thompson));
    } else if (name == "fig2_cycle20") {
        RewardStream rng(derive_seed(b.seed, StreamKind::preset, 2));
        std::vector<double> means(20);
        for (double& m : means) m = rng.uniform();
        const auto instance = BanditInstance::gaussian(means, 1.0);
        out.push_back(b.make("fig2_cycle20_dec_ts", instance, Topology::cycle(20), PolicyKind::dec_thompson));
        out.push_back(b.make("fig2_cycle20_dec_bayes_ucb", instance, Topology::cycle(20), PolicyKind::dec_bayes_ucb));
    } else if (name == "fig3_topology") {
        out.push_back(b.make("fig3_topology_complete", bern17, Topology::complete(64), PolicyKind::dec_thompson));
        out.push_back(b.make("fig3_topology_kregular5", bern17, Topology::k_regular(64, 5), PolicyKind::dec_thompson));
        out.push_back(b.make("fig3_topology_kregular3", bern17, Topology::k_regular(64, 3), PolicyKind::dec_thompson));
        out.push_back(b.make("fig3_topology_grid8x8", bern17, Topology::grid(8, 8), PolicyKind::dec_thompson));
    } else if (name == "fig4_complete" || name == "fig4_cycle") {
        const bool complete = name == "fig4_complete";
        for (std::size_t n : kAgentCounts) {
            out.push_back(b.make(std::string(name) + "_n" + std::to_string(n), bern17,
                                 complete ? Topology::complete(n) : Topology::cycle(n), PolicyKind::dec_thompson));
        }
    } else if (name == "fig5_gossip") {
        out.push_back(b.make("fig5_gossip_pairwise", gauss17, Topology::complete(64), PolicyKind::dec_thompson,
                             ScheduleKind::gossip));
        out.push_back(b.make("fig5_gossip_static_complete", gauss17, Topology::complete(64), PolicyKind::dec_thompson));
    } else if (name == "fig5_linkfail") {
        for (double p : kFailProbs) {
            out.push_back(b.make("fig5_linkfail_p" + prob_label(p), gauss17, Topology::complete(64),
                                 PolicyKind::dec_thompson, ScheduleKind::link_failure, p));
        }
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    return out;
}

// ------------------------------------------------------------------- output

void write_file_atomic(const fs::path& path, std::string_view contents)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.close();
        if (!out) {
            fs::remove(tmp);
            throw std::runtime_error("write to " + tmp.string() + " failed");
        }
    }
    fs::rename(tmp, path);
}

std::string regret_csv(const AggregateResult& result)
{
    std::string out = "round,mean_regret,stderr_regret\n";
    for (std::size_t p = 0; p < result.rounds.size(); ++p) {
        out += std::to_string(result.rounds[p]);
        out += ',';
        out += format_double(result.mean[p]);
        out += ',';
        out += format_double(result.std_error[p]);
        out += '\n';
    }
    return out;
}

std::string per_run_csv(const AggregateResult& result)
{
    std::string out = "run,round,regret\n";
    for (std::size_t r = 0; r < result.runs.size(); ++r) {
        const auto& trace = result.runs[r].regret;
        for (std::size_t p = 0; p < result.rounds.size(); ++p) {
            out += std::to_string(r);
            out += ',';
            out += std::to_string(result.rounds[p]);
            out += ',';
            out += format_double(trace[p]);
            out += '\n';
        }
    }
    return out;
}

std::string stats_text(const ScenarioFile& file, const AggregateResult& result)
{
    const Scenario& s = file.scenario;
    std::uint64_t total = 0;
    for (std::uint64_t m : result.messages) total += m;
    const double per_run = static_cast<double>(total) / static_cast<double>(result.messages.size());
    std::ostringstream out;
    out << "name=" << s.name << '\n'
        << "policy=" << to_string(s.policy.kind) << '\n'
        << "topology=" << s.schedule.topology.describe() << '\n'
        << "schedule=" << schedule_name(s.schedule.kind) << '\n'
        << "n_agents=" << s.n_agents << '\n'
        << "num_arms=" << s.instance.num_arms() << '\n'
        << "horizon=" << s.horizon << '\n'
        << "n_runs=" << s.n_runs << '\n'
        << "seed=" << s.master_seed << '\n'
        << "regret_mode=" << to_string(s.regret) << '\n'
        << "final_mean_regret=" << format_double(result.final_mean()) << '\n'
        << "final_stderr_regret=" << format_double(result.final_stderr()) << '\n'
        << "messages_total=" << total << '\n'
        << "messages_per_run=" << format_double(per_run) << '\n'
        << "messages_per_round=" << format_double(per_run / static_cast<double>(s.horizon)) << '\n';
    return out.str();
}

fs::path stats_path(const fs::path& output)
{
    fs::path p = output;
    p.replace_extension(".stats.txt");
    return p;
}

std::vector<fs::path> run_and_write(const ScenarioFile& file)
{
    Scenario scenario = file.scenario;
    scenario.keep_runs = file.per_run_output.has_value();
    const AggregateResult result = run_scenario(scenario);
    std::vector<fs::path> written;
    write_file_atomic(file.output, regret_csv(result));
    written.push_back(file.output);
    if (file.per_run_output) {
        write_file_atomic(*file.per_run_output, per_run_csv(result));
        written.push_back(*file.per_run_output);
    }
    const fs::path stats = stats_path(file.output);
    write_file_atomic(stats, stats_text(file, result));
    written.push_back(stats);
    return written;
}

std::vector<fs::path> write_bound(const ScenarioFile& file)
{
    const Scenario& s = file.scenario;
    if (s.instance.family() != RewardFamily::bernoulli) {
        throw std::invalid_argument("the regret bound needs a Bernoulli scenario");
    }
    if (s.schedule.kind != ScheduleKind::static_matrix) {
        throw std::invalid_argument("the regret bound needs a static schedule");
    }
    const CommMatrix w = build_metropolis(s.schedule.topology);
    BoundInputs in;
    in.instance = s.instance;
    in.n_agents = s.n_agents;
    in.lambda2 = second_eigenvalue(w);
    in.epsilon = file.epsilon;
    in.horizon = static_cast<double>(s.horizon);
    if (!(in.lambda2 < 1.0)) {
        throw std::invalid_argument("communication matrix has no spectral gap");
    }

    const auto rounds = recorded_rounds(s.horizon, s.record_every);
    const auto curve = bound_curve(in, rounds);
    std::string csv = "round,mean_regret,stderr_regret\n";
    for (std::size_t p = 0; p < rounds.size(); ++p) {
        csv += std::to_string(rounds[p]) + ',' + format_double(curve[p]) + ",0\n";
    }

    const RegretBound at_t = regret_upper_bound(in);
    const double slope = asymptotic_slope(s.instance, s.n_agents);
    std::ostringstream stats;
    stats << "name=" << s.name << '\n'
          << "n_agents=" << s.n_agents << '\n'
          << "horizon=" << s.horizon << '\n'
          << "lambda2=" << format_double(in.lambda2) << '\n'
          << "epsilon=" << format_double(in.epsilon) << '\n'
          << "asymptotic_slope=" << format_double(slope) << '\n'
          << "leading_term=" << format_double(at_t.leading) << '\n'
          << "network_term=" << format_double(at_t.network) << '\n'
          << "bound_total=" << format_double(at_t.total()) << '\n'
          << "n_tilde=" << format_double(at_t.n_tilde) << '\n'
          << "unquantified_remainder=O(epsilon^-n_tilde), excluded from bound_total\n";

    const fs::path dir = file.output.parent_path();
    const std::string stem = file.output.stem().string() + "_bound";
    const fs::path csv_path = dir / (stem + ".csv");
    const fs::path stats_file = dir / (stem + ".stats.txt");
    write_file_atomic(csv_path, csv);
    write_file_atomic(stats_file, stats.str());
    return {csv_path, stats_file};
}

} // namespace decbandit
