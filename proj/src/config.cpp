#include "proxnet/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

namespace proxnet {
namespace {

using json = nlohmann::json;

class Reader {
  public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw ParseError(source_ + ": " + (path.empty() ? "/" : path) + ": " + what);
    }

    void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) const {
        if (!obj.is_object()) fail(path, "expected an object");
        const std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& [k, v] : obj.items()) {
            if (!keys.count(k)) fail(path + "/" + k, "unknown key");
        }
    }

    const json& need(const json& obj, const std::string& path, const char* key) const {
        if (!obj.contains(key)) fail(path, std::string("missing required key '") + key + "'");
        return obj.at(key);
    }

    double number(const json& v, const std::string& path) const {
        if (!v.is_number()) fail(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(path, "number is not finite");
        return d;
    }

    std::uint64_t integer(const json& v, const std::string& path) const {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            fail(path, "expected a nonnegative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean(const json& v, const std::string& path) const {
        if (!v.is_boolean()) fail(path, "expected true or false");
        return v.get<bool>();
    }

    Vector vector(const json& v, const std::string& path) const {
        if (!v.is_array()) fail(path, "expected an array of numbers");
        Vector out;
        out.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "/" + std::to_string(i)));
        return out;
    }

    std::vector<Vector> vectors(const json& v, const std::string& path) const {
        if (!v.is_array()) fail(path, "expected an array of arrays");
        std::vector<Vector> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vector(v[i], path + "/" + std::to_string(i)));
        return out;
    }

    Matrix matrix(const json& v, const std::string& path) const {
        const auto rows = vectors(v, path);
        if (rows.empty()) fail(path, "matrix has no rows");
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].size() != rows.front().size()) fail(path + "/" + std::to_string(i), "ragged matrix row");
        return Matrix::from_rows(rows);
    }

    Box box_bounds(const json& v, const std::string& path) const {
        only_keys(v, path, {"lower", "upper"});
        Vector lo = vector(need(v, path, "lower"), path + "/lower");
        Vector hi = vector(need(v, path, "upper"), path + "/upper");
        if (lo.size() != hi.size()) fail(path, "lower and upper have different lengths");
        for (std::size_t d = 0; d < lo.size(); ++d)
            if (lo[d] > hi[d]) fail(path, "lower exceeds upper");
        return Box::from_bounds(std::move(lo), std::move(hi));
    }

    ConvexSet constraint(const json& v, const std::string& path) const {
        only_keys(v, path, {"box", "ball"});
        if (v.size() != 1) fail(path, "expected exactly one of 'box' or 'ball'");
        if (v.contains("box")) {
            const auto& b = v.at("box");
            const std::string p = path + "/box";
            only_keys(b, p, {"center", "half_width"});
            const Vector c = vector(need(b, p, "center"), p + "/center");
            const Vector h = vector(need(b, p, "half_width"), p + "/half_width");
            if (c.size() != h.size()) fail(p, "center and half_width have different lengths");
            for (double x : h)
                if (!(x > 0.0)) fail(p + "/half_width", "half-widths must be positive");
            return Box::centered(c, h);
        }
        const auto& b = v.at("ball");
        const std::string p = path + "/ball";
        only_keys(b, p, {"center", "radius"});
        Ball ball{vector(need(b, p, "center"), p + "/center"), number(need(b, p, "radius"), p + "/radius")};
        if (!(ball.radius > 0.0)) fail(p + "/radius", "radius must be positive");
        return ball;
    }

  private:
    std::string source_;
};

json matrix_json(const Matrix& m) { return json(m.to_rows()); }

json constraint_json(const ConvexSet& set) {
    if (const auto* b = std::get_if<Box>(&set)) return {{"box", {{"center", b->center()}, {"half_width", b->half_width()}}}};
    if (const auto* b = std::get_if<Ball>(&set)) return {{"ball", {{"center", b->center}, {"radius", b->radius}}}};
    const auto& r = std::get<SubBox>(set).resolved;
    return {{"box", {{"center", r.center()}, {"half_width", r.half_width()}}}};
}

}  // namespace

Config parse_config_text(std::string_view text, std::string_view source) {
    const Reader rd{std::string(source)};
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw ParseError(std::string(source) + ": missing required section 'graph' (document is empty)");
    }
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(source) + ": " + e.what());
    }
    rd.only_keys(doc, "", {"graph", "weights", "agents", "signal", "scenario", "solver", "certificate"});

    Config cfg;
    if (!doc.contains("graph")) rd.fail("", "missing required section 'graph'");
    {
        const auto& g = doc.at("graph");
        rd.only_keys(g, "/graph", {"P"});
        cfg.graph = rd.matrix(rd.need(g, "/graph", "P"), "/graph/P");
    }
    if (doc.contains("weights")) {
        const auto& w = doc.at("weights");
        rd.only_keys(w, "/weights", {"Q"});
        cfg.weights = rd.vector(rd.need(w, "/weights", "Q"), "/weights/Q");
    }
    if (doc.contains("agents")) {
        const auto& a = doc.at("agents");
        rd.only_keys(a, "/agents", {"dim", "list"});
        AgentsSection sec;
        sec.dim = rd.integer(rd.need(a, "/agents", "dim"), "/agents/dim");
        const auto& list = rd.need(a, "/agents", "list");
        if (!list.is_array()) rd.fail("/agents/list", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string p = "/agents/list/" + std::to_string(i);
            rd.only_keys(list[i], p, {"gamma", "target", "initial", "constraint"});
            AgentSpec s;
            s.gamma = rd.number(rd.need(list[i], p, "gamma"), p + "/gamma");
            s.target = rd.vector(rd.need(list[i], p, "target"), p + "/target");
            s.initial = rd.vector(rd.need(list[i], p, "initial"), p + "/initial");
            s.constraint = rd.constraint(rd.need(list[i], p, "constraint"), p + "/constraint");
            sec.list.push_back(std::move(s));
        }
        cfg.agents = std::move(sec);
    }
    if (doc.contains("signal")) {
        const auto& s = doc.at("signal");
        rd.only_keys(s, "/signal", {"tau", "exhaustive", "modes", "segments"});
        SignalSection sec;
        sec.signal.tau = rd.integer(rd.need(s, "/signal", "tau"), "/signal/tau");
        if (s.contains("exhaustive")) sec.signal.exhaustive = rd.boolean(s.at("exhaustive"), "/signal/exhaustive");
        const auto& modes = rd.need(s, "/signal", "modes");
        if (!modes.is_array()) rd.fail("/signal/modes", "expected an array");
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const std::string p = "/signal/modes/" + std::to_string(i);
            rd.only_keys(modes[i], p, {"P", "Q", "eta", "kappa"});
            ModeSpec m;
            m.p = rd.matrix(rd.need(modes[i], p, "P"), p + "/P");
            m.q = rd.vector(rd.need(modes[i], p, "Q"), p + "/Q");
            if (modes[i].contains("eta")) m.eta = rd.number(modes[i].at("eta"), p + "/eta");
            if (modes[i].contains("kappa")) m.kappa = rd.number(modes[i].at("kappa"), p + "/kappa");
            sec.modes.push_back(std::move(m));
        }
        const auto& segs = rd.need(s, "/signal", "segments");
        if (!segs.is_array()) rd.fail("/signal/segments", "expected an array of [mode, duration] pairs");
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const std::string p = "/signal/segments/" + std::to_string(i);
            if (!segs[i].is_array() || segs[i].size() != 2) rd.fail(p, "expected a [mode, duration] pair");
            const auto mode = rd.integer(segs[i][0], p + "/0");
            if (mode == 0) rd.fail(p + "/0", "mode indices start at 1");
            sec.signal.segments.push_back({static_cast<std::size_t>(mode - 1),
                                           static_cast<std::size_t>(rd.integer(segs[i][1], p + "/1"))});
        }
        cfg.signal = std::move(sec);
    }
    if (doc.contains("scenario")) {
        const auto& s = doc.at("scenario");
        rd.only_keys(s, "/scenario", {"initial", "targets", "gamma", "r", "epsilon", "steps", "obstacles"});
        ScenarioSection sec;
        sec.initial = rd.vectors(rd.need(s, "/scenario", "initial"), "/scenario/initial");
        sec.targets = rd.vectors(rd.need(s, "/scenario", "targets"), "/scenario/targets");
        sec.gamma = rd.vector(rd.need(s, "/scenario", "gamma"), "/scenario/gamma");
        if (s.contains("r")) sec.r = rd.number(s.at("r"), "/scenario/r");
        if (s.contains("epsilon")) sec.epsilon = rd.number(s.at("epsilon"), "/scenario/epsilon");
        if (s.contains("steps")) sec.steps = rd.integer(s.at("steps"), "/scenario/steps");
        if (s.contains("obstacles")) {
            const auto& obs = s.at("obstacles");
            if (!obs.is_array()) rd.fail("/scenario/obstacles", "expected an array");
            for (std::size_t i = 0; i < obs.size(); ++i)
                sec.obstacles.push_back(rd.box_bounds(obs[i], "/scenario/obstacles/" + std::to_string(i)));
        }
        cfg.scenario = std::move(sec);
    }
    if (doc.contains("solver")) {
        const auto& s = doc.at("solver");
        rd.only_keys(s, "/solver", {"eta", "tol", "max_iter", "stride", "seed"});
        if (s.contains("eta")) cfg.solver.eta = rd.number(s.at("eta"), "/solver/eta");
        if (s.contains("tol")) cfg.solver.tol = rd.number(s.at("tol"), "/solver/tol");
        if (s.contains("max_iter")) cfg.solver.max_iter = rd.integer(s.at("max_iter"), "/solver/max_iter");
        if (s.contains("stride")) cfg.solver.stride = rd.integer(s.at("stride"), "/solver/stride");
        if (s.contains("seed")) cfg.solver.seed = rd.integer(s.at("seed"), "/solver/seed");
    }
    if (doc.contains("certificate")) {
        const auto& c = doc.at("certificate");
        rd.only_keys(c, "/certificate", {"eta", "lambda_min", "feasible", "seed"});
        CertificateSection sec;
        sec.eta = rd.number(rd.need(c, "/certificate", "eta"), "/certificate/eta");
        sec.lambda_min = rd.number(rd.need(c, "/certificate", "lambda_min"), "/certificate/lambda_min");
        sec.feasible = rd.boolean(rd.need(c, "/certificate", "feasible"), "/certificate/feasible");
        if (c.contains("seed")) sec.seed = rd.integer(c.at("seed"), "/certificate/seed");
        cfg.certificate = sec;
    }
    return cfg;
}

Config parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

std::string write_config(const Config& cfg) {
    json doc = json::object();
    doc["graph"] = {{"P", matrix_json(cfg.graph)}};
    if (cfg.weights) doc["weights"] = {{"Q", *cfg.weights}};
    if (cfg.agents) {
        json list = json::array();
        for (const auto& a : cfg.agents->list) {
            list.push_back({{"gamma", a.gamma},
                            {"target", a.target},
                            {"initial", a.initial},
                            {"constraint", constraint_json(a.constraint)}});
        }
        doc["agents"] = {{"dim", cfg.agents->dim}, {"list", list}};
    }
    if (cfg.signal) {
        json modes = json::array();
        for (const auto& m : cfg.signal->modes)
            modes.push_back({{"P", matrix_json(m.p)}, {"Q", m.q}, {"eta", m.eta}, {"kappa", m.kappa}});
        json segs = json::array();
        for (const auto& s : cfg.signal->signal.segments) segs.push_back({s.mode + 1, s.duration});
        doc["signal"] = {{"tau", cfg.signal->signal.tau},
                         {"exhaustive", cfg.signal->signal.exhaustive},
                         {"modes", modes},
                         {"segments", segs}};
    }
    if (cfg.scenario) {
        const auto& s = *cfg.scenario;
        json obs = json::array();
        for (const auto& b : s.obstacles) obs.push_back({{"lower", b.lower()}, {"upper", b.upper()}});
        doc["scenario"] = {{"initial", s.initial}, {"targets", s.targets}, {"gamma", s.gamma}, {"r", s.r},
                           {"epsilon", s.epsilon}, {"steps", s.steps},     {"obstacles", obs}};
    }
    doc["solver"] = {{"eta", cfg.solver.eta},
                     {"tol", cfg.solver.tol},
                     {"max_iter", cfg.solver.max_iter},
                     {"stride", cfg.solver.stride},
                     {"seed", cfg.solver.seed}};
    if (cfg.certificate) {
        doc["certificate"] = {{"eta", cfg.certificate->eta},
                              {"lambda_min", cfg.certificate->lambda_min},
                              {"feasible", cfg.certificate->feasible},
                              {"seed", cfg.certificate->seed}};
    }
    return doc.dump(2) + "\n";
}

ValidationReport validate_config(const Config& cfg) {
    ValidationReport report;
    auto merge = [&](const std::string& prefix, const ValidationReport& r) {
        for (const auto& v : r.violations) report.fail(prefix + v);
    };
    try {
        merge("graph: ", validate_adjacency(cfg.graph));
    } catch (const StructuralError& e) {
        report.fail(std::string("graph: ") + e.what());
    }
    const std::size_t n = cfg.graph.rows();
    if (cfg.weights) {
        if (cfg.weights->size() != n) report.fail("weights: expected " + std::to_string(n) + " diagonal entries");
        for (double q : *cfg.weights)
            if (!(q > 0.0)) report.fail("weights: diagonal entries must be positive");
    }
    if (cfg.agents) {
        if (cfg.agents->list.size() != n) report.fail("agents: expected " + std::to_string(n) + " agents");
        if (cfg.agents->dim == 0) report.fail("agents: dim must be positive");
        for (std::size_t i = 0; i < cfg.agents->list.size(); ++i) {
            const auto& a = cfg.agents->list[i];
            const std::string who = "agents: agent " + std::to_string(i + 1) + ": ";
            if (a.target.size() != cfg.agents->dim || a.initial.size() != cfg.agents->dim ||
                dimension(a.constraint) != cfg.agents->dim) {
                report.fail(who + "dimension differs from dim");
            }
            if (!(a.gamma >= 0.0)) report.fail(who + "gamma must be nonnegative");
        }
    }
    if (cfg.signal) {
        const auto& sig = *cfg.signal;
        if (sig.modes.empty()) report.fail("signal: no modes");
        for (std::size_t m = 0; m < sig.modes.size(); ++m) {
            const std::string who = "signal: mode " + std::to_string(m + 1) + ": ";
            try {
                merge(who, validate_adjacency(sig.modes[m].p));
            } catch (const StructuralError& e) {
                report.fail(who + e.what());
            }
            if (sig.modes[m].p.rows() != n || sig.modes[m].q.size() != n) report.fail(who + "size differs from graph");
            if (!(sig.modes[m].eta > 0.0 && sig.modes[m].eta < 1.0)) report.fail(who + "eta must lie in (0, 1)");
            if (!(sig.modes[m].kappa > 0.0)) report.fail(who + "kappa must be positive");
        }
        merge("signal: ", validate_signal(sig.signal, sig.modes.size()));
    }
    if (cfg.scenario) {
        const auto& s = *cfg.scenario;
        if (s.initial.size() != n || s.targets.size() != n || s.gamma.size() != n) {
            report.fail("scenario: expected " + std::to_string(n) + " robots");
        }
        if (!(s.r > 0.0)) report.fail("scenario: r must be positive");
        if (!(s.epsilon > 0.0)) report.fail("scenario: epsilon must be positive");
    }
    if (!(cfg.solver.eta > 0.0 && cfg.solver.eta < 1.0)) report.fail("solver: eta must lie in (0, 1)");
    if (!(cfg.solver.tol > 0.0)) report.fail("solver: tol must be positive");
    return report;
}

AdjacencyMatrix make_adjacency(const Config& cfg) { return AdjacencyMatrix(cfg.graph); }

WeightMatrix make_weights(const Config& cfg) {
    if (!cfg.weights) throw ValidationError("missing section", {"weights: section is required"});
    return WeightMatrix::diagonal(*cfg.weights);
}

GameInstance make_game(const Config& cfg) {
    if (!cfg.agents) throw ValidationError("missing section", {"agents: section is required"});
    std::vector<AgentCost> costs;
    for (const auto& a : cfg.agents->list) costs.push_back({a.gamma, a.target, a.constraint, {}});
    return GameInstance::with_weights(make_adjacency(cfg), cfg.agents->dim, std::move(costs), make_weights(cfg),
                                      cfg.solver.eta);
}

CollectiveState make_initial_state(const Config& cfg) {
    if (!cfg.agents) throw ValidationError("missing section", {"agents: section is required"});
    std::vector<Vector> blocks;
    for (const auto& a : cfg.agents->list) blocks.push_back(a.initial);
    return CollectiveState::from_blocks(blocks);
}

SwitchedGame make_switched_game(const Config& cfg) {
    if (!cfg.signal) throw ValidationError("missing section", {"signal: section is required"});
    if (!cfg.agents) throw ValidationError("missing section", {"agents: section is required"});
    std::vector<SwitchMode> modes;
    for (const auto& m : cfg.signal->modes)
        modes.emplace_back(AdjacencyMatrix(m.p), WeightMatrix::diagonal(m.q), m.eta, m.kappa);
    std::vector<AgentCost> costs;
    for (const auto& a : cfg.agents->list) costs.push_back({a.gamma, a.target, a.constraint, {}});
    return SwitchedGame(std::move(modes), cfg.agents->dim, std::move(costs));
}

RobotScenario make_scenario(const Config& cfg, bool with_obstacles) {
    if (!cfg.scenario) throw ValidationError("missing section", {"scenario: section is required"});
    const auto& s = *cfg.scenario;
    RobotScenario scn;
    scn.p = cfg.graph;
    scn.q_diag = make_weights(cfg).diag();
    scn.initial = s.initial;
    scn.targets = s.targets;
    scn.gamma = s.gamma;
    scn.r = s.r;
    scn.epsilon = s.epsilon;
    scn.steps = s.steps;
    scn.eta = cfg.solver.eta;
    scn.stop_tol = cfg.solver.tol;
    if (with_obstacles) scn.obstacles.boxes = s.obstacles;
    scn.validate();
    return scn;
}

}  // namespace proxnet
