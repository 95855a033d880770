#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ias::io {

using nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& known,
                         const std::string& section) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key)) {
            throw ValidationError("unknown key \"" + section + "." + key + "\" in config");
        }
    }
}

double get_num(const ordered_json& obj, const char* section, const char* key, double dflt) {
    if (!obj.contains(key)) return dflt;
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ValidationError(std::string(section) + "." + key + " must be a number");
    }
    return v.get<double>();
}

}  // namespace

void RunConfig::validate() const {
    model.validate();
    thresholds.validate();
    sim.validate(noise.grid_dt, thresholds);
    CostConfig cc = cost;
    cc.psa_init = sim.x1_init + sim.x2_init;
    cc.horizon = sim.horizon;
    cc.validate();
    opt.validate();
    if (!(fd_delta_rel > 0.0)) throw ValidationError("validation.fd_delta_rel must be > 0");
    if (fd_max_retries < 0) throw ValidationError("validation.fd_max_retries must be >= 0");
    if (unbiasedness_paths < 30) {
        throw ValidationError("validation.unbiasedness_paths must be >= 30");
    }
    if (threads < 1) throw ValidationError("output.threads must be >= 1");
}

RunConfig parse_config(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config root must be a JSON object");
    reject_unknown_keys(j, {"model", "thresholds", "sim", "noise", "cost", "optimizer",
                            "validation", "output"},
                        "");

    RunConfig rc;
    if (j.contains("model")) {
        const auto& m = j["model"];
        reject_unknown_keys(m,
                            {"alpha1", "alpha2", "beta1", "beta2", "k1", "k2", "k3", "k4",
                             "m1", "d", "x30", "sigma", "lambda1", "mu1", "mu3", "c1", "c2"},
                            "model");
        auto& p = rc.model;
        p.alpha1 = get_num(m, "model", "alpha1", p.alpha1);
        p.alpha2 = get_num(m, "model", "alpha2", p.alpha2);
        p.beta1 = get_num(m, "model", "beta1", p.beta1);
        p.beta2 = get_num(m, "model", "beta2", p.beta2);
        p.k1 = get_num(m, "model", "k1", p.k1);
        p.k2 = get_num(m, "model", "k2", p.k2);
        p.k3 = get_num(m, "model", "k3", p.k3);
        p.k4 = get_num(m, "model", "k4", p.k4);
        p.m1 = get_num(m, "model", "m1", p.m1);
        p.d = get_num(m, "model", "d", p.d);
        p.x30 = get_num(m, "model", "x30", p.x30);
        p.sigma = get_num(m, "model", "sigma", p.sigma);
        p.lambda1 = get_num(m, "model", "lambda1", p.lambda1);
        p.mu1 = get_num(m, "model", "mu1", p.mu1);
        p.mu3 = get_num(m, "model", "mu3", p.mu3);
        p.c1 = get_num(m, "model", "c1", p.c1);
        p.c2 = get_num(m, "model", "c2", p.c2);
    }
    if (j.contains("thresholds")) {
        const auto& t = j["thresholds"];
        reject_unknown_keys(t,
                            {"theta1", "theta2", "theta1_min", "theta1_max", "theta2_min",
                             "theta2_max"},
                            "thresholds");
        auto& th = rc.thresholds;
        th.theta1 = get_num(t, "thresholds", "theta1", th.theta1);
        th.theta2 = get_num(t, "thresholds", "theta2", th.theta2);
        th.theta1_min = get_num(t, "thresholds", "theta1_min", th.theta1_min);
        th.theta1_max = get_num(t, "thresholds", "theta1_max", th.theta1_max);
        th.theta2_min = get_num(t, "thresholds", "theta2_min", th.theta2_min);
        th.theta2_max = get_num(t, "thresholds", "theta2_max", th.theta2_max);
    }
    if (j.contains("sim")) {
        const auto& s = j["sim"];
        reject_unknown_keys(
            s, {"T", "dt", "event_tol", "max_events", "x1_0", "x2_0", "x3_0", "initial_mode"},
            "sim");
        auto& sc = rc.sim;
        sc.horizon = get_num(s, "sim", "T", sc.horizon);
        sc.dt = get_num(s, "sim", "dt", sc.dt);
        sc.event_tol = get_num(s, "sim", "event_tol", sc.event_tol);
        sc.max_events = static_cast<int>(get_num(s, "sim", "max_events", sc.max_events));
        sc.x1_init = get_num(s, "sim", "x1_0", sc.x1_init);
        sc.x2_init = get_num(s, "sim", "x2_0", sc.x2_init);
        sc.x3_init = get_num(s, "sim", "x3_0", sc.x3_init);
        if (s.contains("initial_mode")) {
            const std::string m = s["initial_mode"].get<std::string>();
            if (m == "ON") {
                sc.initial_mode = Mode::On;
            } else if (m == "OFF") {
                sc.initial_mode = Mode::Off;
            } else {
                throw ValidationError("sim.initial_mode must be \"ON\" or \"OFF\"");
            }
        }
    }
    if (j.contains("noise")) {
        const auto& n = j["noise"];
        reject_unknown_keys(n, {"grid_dt", "std1", "std2", "std3", "seed"}, "noise");
        auto& ns = rc.noise;
        ns.grid_dt = get_num(n, "noise", "grid_dt", ns.grid_dt);
        ns.stds[0] = get_num(n, "noise", "std1", ns.stds[0]);
        ns.stds[1] = get_num(n, "noise", "std2", ns.stds[1]);
        ns.stds[2] = get_num(n, "noise", "std3", ns.stds[2]);
        if (n.contains("seed")) ns.seed = n["seed"].get<uint64_t>();
    }
    if (j.contains("cost")) {
        const auto& c = j["cost"];
        reject_unknown_keys(c, {"W1", "W2"}, "cost");
        rc.cost.W1 = get_num(c, "cost", "W1", rc.cost.W1);
        rc.cost.W2 = get_num(c, "cost", "W2", rc.cost.W2);
    }
    if (j.contains("optimizer")) {
        const auto& o = j["optimizer"];
        reject_unknown_keys(o,
                            {"rho0", "schedule", "max_iters", "batch_size", "grad_tol",
                             "seed_policy"},
                            "optimizer");
        auto& oc = rc.opt;
        oc.rho0 = get_num(o, "optimizer", "rho0", oc.rho0);
        oc.max_iters = static_cast<int>(get_num(o, "optimizer", "max_iters", oc.max_iters));
        oc.batch_size = static_cast<int>(get_num(o, "optimizer", "batch_size", oc.batch_size));
        oc.grad_tol = get_num(o, "optimizer", "grad_tol", oc.grad_tol);
        if (o.contains("schedule")) {
            const std::string s = o["schedule"].get<std::string>();
            if (s == "constant") {
                oc.schedule = StepSchedule::Constant;
            } else if (s == "1/l") {
                oc.schedule = StepSchedule::InverseLinear;
            } else if (s == "1/sqrt(l)") {
                oc.schedule = StepSchedule::InverseSqrt;
            } else {
                throw ValidationError(
                    "optimizer.schedule must be one of \"constant\", \"1/l\", \"1/sqrt(l)\"");
            }
        }
        if (o.contains("seed_policy")) {
            const std::string s = o["seed_policy"].get<std::string>();
            if (s == "fresh") {
                oc.seed_policy = SeedPolicy::Fresh;
            } else if (s == "crn_pool") {
                oc.seed_policy = SeedPolicy::CrnPool;
            } else {
                throw ValidationError("optimizer.seed_policy must be \"fresh\" or \"crn_pool\"");
            }
        }
    }
    if (j.contains("validation")) {
        const auto& v = j["validation"];
        reject_unknown_keys(v, {"fd_delta_rel", "fd_max_retries", "unbiasedness_paths"},
                            "validation");
        rc.fd_delta_rel = get_num(v, "validation", "fd_delta_rel", rc.fd_delta_rel);
        rc.fd_max_retries =
            static_cast<int>(get_num(v, "validation", "fd_max_retries", rc.fd_max_retries));
        rc.unbiasedness_paths = static_cast<int>(
            get_num(v, "validation", "unbiasedness_paths", rc.unbiasedness_paths));
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        reject_unknown_keys(o, {"directory", "timestamp", "threads", "patient_csv"}, "output");
        if (o.contains("directory")) rc.output_dir = o["directory"].get<std::string>();
        if (o.contains("timestamp")) rc.timestamp = o["timestamp"].get<bool>();
        rc.threads = static_cast<int>(get_num(o, "output", "threads", rc.threads));
        if (o.contains("patient_csv")) rc.patient_csv = o["patient_csv"].get<std::string>();
    }

    rc.cost.psa_init = rc.sim.x1_init + rc.sim.x2_init;
    rc.cost.horizon = rc.sim.horizon;
    rc.opt.threads = rc.threads;
    rc.validate();
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& rc) {
    ordered_json j;
    j["model"] = {{"alpha1", rc.model.alpha1}, {"alpha2", rc.model.alpha2},
                  {"beta1", rc.model.beta1},   {"beta2", rc.model.beta2},
                  {"k1", rc.model.k1},         {"k2", rc.model.k2},
                  {"k3", rc.model.k3},         {"k4", rc.model.k4},
                  {"m1", rc.model.m1},         {"d", rc.model.d},
                  {"x30", rc.model.x30},       {"sigma", rc.model.sigma},
                  {"lambda1", rc.model.lambda1}, {"mu1", rc.model.mu1},
                  {"mu3", rc.model.mu3},       {"c1", rc.model.c1},
                  {"c2", rc.model.c2}};
    j["thresholds"] = {{"theta1", rc.thresholds.theta1},
                       {"theta2", rc.thresholds.theta2},
                       {"theta1_min", rc.thresholds.theta1_min},
                       {"theta1_max", rc.thresholds.theta1_max},
                       {"theta2_min", rc.thresholds.theta2_min},
                       {"theta2_max", rc.thresholds.theta2_max}};
    j["sim"] = {{"T", rc.sim.horizon},
                {"dt", rc.sim.dt},
                {"event_tol", rc.sim.event_tol},
                {"max_events", rc.sim.max_events},
                {"x1_0", rc.sim.x1_init},
                {"x2_0", rc.sim.x2_init},
                {"x3_0", rc.sim.x3_init},
                {"initial_mode", mode_name(rc.sim.initial_mode)}};
    j["noise"] = {{"grid_dt", rc.noise.grid_dt},
                  {"std1", rc.noise.stds[0]},
                  {"std2", rc.noise.stds[1]},
                  {"std3", rc.noise.stds[2]},
                  {"seed", rc.noise.seed}};
    j["cost"] = {{"W1", rc.cost.W1}, {"W2", rc.cost.W2}};
    const char* sched = rc.opt.schedule == StepSchedule::Constant ? "constant"
                        : rc.opt.schedule == StepSchedule::InverseLinear ? "1/l"
                                                                         : "1/sqrt(l)";
    j["optimizer"] = {{"rho0", rc.opt.rho0},
                      {"schedule", sched},
                      {"max_iters", rc.opt.max_iters},
                      {"batch_size", rc.opt.batch_size},
                      {"grad_tol", rc.opt.grad_tol},
                      {"seed_policy", rc.opt.seed_policy == SeedPolicy::Fresh ? "fresh"
                                                                              : "crn_pool"}};
    j["validation"] = {{"fd_delta_rel", rc.fd_delta_rel},
                       {"fd_max_retries", rc.fd_max_retries},
                       {"unbiasedness_paths", rc.unbiasedness_paths}};
    j["output"] = {{"directory", rc.output_dir},
                   {"timestamp", rc.timestamp},
                   {"threads", rc.threads}};
    if (!rc.patient_csv.empty()) j["output"]["patient_csv"] = rc.patient_csv;
    return j.dump(2) + "\n";
}

}  // namespace ias::io
