#include "cmanet/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#define TOML_ENABLE_FORMATTERS 1
#include <toml.hpp>

#include "cmanet/error.hpp"

namespace cmanet {

namespace {

using linkmodel::DataType;
using linkmodel::RangeClass;
using linkmodel::RangeLabel;

const std::set<std::string_view> kActions{"register", "login", "start",  "leave",   "discover", "connect",
                                          "blacklist", "send", "stream", "session", "uplink",   "relay"};

bool needs_target(std::string_view action) {
    return action == "connect" || action == "blacklist" || action == "send" || action == "stream";
}

bool needs_payload(std::string_view action) { return action == "send" || action == "stream" || action == "relay"; }

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Collects schema problems while walking the document so that one load
// reports every mistake at once.
class Reader {
public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    void check_keys(const toml::table& t, std::string_view where, std::initializer_list<std::string_view> allowed) {
        for (const auto& [k, v] : t) {
            if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end())
                errors_.push_back("unknown key '" + std::string(k.str()) + "' in " + std::string(where));
        }
    }

    void number(const toml::table& t, std::string_view key, double& out, std::string_view where) {
        const toml::node* n = t.get(key);
        if (n == nullptr) return;
        if (const auto v = n->value<double>(); v && (n->is_floating_point() || n->is_integer())) {
            out = *v;
        } else {
            errors_.push_back(std::string(where) + "." + std::string(key) + " must be a number");
        }
    }

    void integer(const toml::table& t, std::string_view key, std::int64_t& out, std::string_view where) {
        const toml::node* n = t.get(key);
        if (n == nullptr) return;
        if (const auto v = n->as_integer()) {
            out = v->get();
        } else {
            errors_.push_back(std::string(where) + "." + std::string(key) + " must be an integer");
        }
    }

    void boolean(const toml::table& t, std::string_view key, bool& out, std::string_view where) {
        const toml::node* n = t.get(key);
        if (n == nullptr) return;
        if (const auto v = n->as_boolean()) {
            out = v->get();
        } else {
            errors_.push_back(std::string(where) + "." + std::string(key) + " must be true or false");
        }
    }

    void string(const toml::table& t, std::string_view key, std::string& out, std::string_view where) {
        const toml::node* n = t.get(key);
        if (n == nullptr) return;
        if (const auto v = n->as_string()) {
            out = v->get();
        } else {
            errors_.push_back(std::string(where) + "." + std::string(key) + " must be a string");
        }
    }

    const toml::table* table(const toml::table& t, std::string_view key) {
        const toml::node* n = t.get(key);
        if (n == nullptr) return nullptr;
        if (const auto* tbl = n->as_table()) return tbl;
        errors_.push_back("'" + std::string(key) + "' must be a table");
        return nullptr;
    }

    const toml::array* array(const toml::table& t, std::string_view key) {
        const toml::node* n = t.get(key);
        if (n == nullptr) return nullptr;
        if (const auto* arr = n->as_array()) return arr;
        errors_.push_back("'" + std::string(key) + "' must be an array");
        return nullptr;
    }

    void error(std::string msg) { errors_.push_back(std::move(msg)); }

private:
    std::vector<std::string>& errors_;
};

void read_mobility(Reader& r, const toml::table& t, mobility::MobilityParams& m) {
    r.check_keys(t, "[mobility]",
                 {"lambda", "mean_speed", "speed_sigma", "max_speed", "mean_direction", "mean_direction_deg",
                  "direction_sigma", "direction_sigma_deg"});
    r.number(t, "lambda", m.lambda, "mobility");
    r.number(t, "mean_speed", m.mean_speed, "mobility");
    r.number(t, "speed_sigma", m.speed_sigma, "mobility");
    r.number(t, "max_speed", m.max_speed, "mobility");
    r.number(t, "mean_direction", m.mean_direction, "mobility");
    r.number(t, "direction_sigma", m.direction_sigma, "mobility");
    double deg = 0.0;
    if (t.contains("mean_direction_deg")) {
        r.number(t, "mean_direction_deg", deg, "mobility");
        m.mean_direction = mobility::degrees_to_radians(deg);
    }
    if (t.contains("direction_sigma_deg")) {
        r.number(t, "direction_sigma_deg", deg, "mobility");
        m.direction_sigma = mobility::degrees_to_radians(deg);
    }
}

void read_devices(Reader& r, const toml::table& t, ScenarioConfig& c) {
    r.check_keys(t, "[devices]", {"count", "net_config", "uplink", "custom"});
    std::int64_t count = c.device_count;
    r.integer(t, "count", count, "devices");
    c.device_count = static_cast<int>(count);
    r.string(t, "net_config", c.net_config, "devices");
    std::string uplink = c.uplink_all ? "all" : "none";
    r.string(t, "uplink", uplink, "devices");
    if (uplink != "all" && uplink != "none") r.error("devices.uplink must be \"all\" or \"none\"");
    c.uplink_all = uplink == "all";

    if (const auto* arr = r.array(t, "custom")) {
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const auto* d = arr->get(i)->as_table();
            const std::string where = "devices.custom[" + std::to_string(i) + "]";
            if (d == nullptr) {
                r.error(where + " must be a table");
                continue;
            }
            r.check_keys(*d, where, {"id", "uplink", "x", "y", "direction", "direction_deg", "stationary", "net_config"});
            DeviceSpec spec;
            r.string(*d, "id", spec.id, where);
            r.boolean(*d, "uplink", spec.uplink, where);
            r.boolean(*d, "stationary", spec.stationary, where);
            r.string(*d, "net_config", spec.net_config, where);
            double v = 0.0;
            if (d->contains("x")) {
                r.number(*d, "x", v, where);
                spec.x = v;
            }
            if (d->contains("y")) {
                r.number(*d, "y", v, where);
                spec.y = v;
            }
            if (d->contains("direction")) {
                r.number(*d, "direction", v, where);
                spec.direction = v;
            }
            if (d->contains("direction_deg")) {
                r.number(*d, "direction_deg", v, where);
                spec.direction = mobility::degrees_to_radians(v);
            }
            c.custom_devices.push_back(std::move(spec));
        }
    }
}

void read_workload(Reader& r, const toml::array& arr, ScenarioConfig& c) {
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto* w = arr.get(i)->as_table();
        const std::string where = "workload[" + std::to_string(i) + "]";
        if (w == nullptr) {
            r.error(where + " must be a table");
            continue;
        }
        r.check_keys(*w, where,
                     {"t", "action", "device", "target", "password", "channel", "data_type", "size_bits", "until", "on",
                      "net_config", "src_manet", "dst_manet"});
        WorkloadAction a;
        r.number(*w, "t", a.t, where);
        r.string(*w, "action", a.action, where);
        r.string(*w, "device", a.device, where);
        r.string(*w, "target", a.target, where);
        r.string(*w, "password", a.password, where);
        r.string(*w, "channel", a.channel, where);
        r.string(*w, "data_type", a.data_type, where);
        r.number(*w, "size_bits", a.size_bits, where);
        r.number(*w, "until", a.until, where);
        r.boolean(*w, "on", a.on, where);
        r.string(*w, "net_config", a.net_config, where);
        r.string(*w, "src_manet", a.src_manet, where);
        r.string(*w, "dst_manet", a.dst_manet, where);
        c.workload.push_back(std::move(a));
    }
}

void read_rates(Reader& r, const toml::table& t, ScenarioConfig& c) {
    std::string csv = "data_type,range,mbps\n";
    for (const auto& [k, v] : t) {
        const auto* arr = v.as_array();
        if (arr == nullptr || arr->size() != 3) {
            r.error("rates." + std::string(k.str()) + " must list three rates (50m, 100m, 200m)");
            continue;
        }
        for (std::size_t j = 0; j < 3; ++j) {
            const auto mbps = arr->get(j)->value<double>();
            if (!mbps) {
                r.error("rates." + std::string(k.str()) + " must contain numbers");
                break;
            }
            csv += std::string(k.str()) + "," + std::string(RangeClass(linkmodel::kRangeLabels[j]).name()) + "," +
                   fmt(*mbps) + "\n";
        }
    }
    try {
        c.rates = linkmodel::RateTable::parse_csv(csv);
    } catch (const ValidationError& e) {
        for (const auto& v : e.violations()) r.error("rates: " + v);
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::Io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

WorkloadAction act(double t, std::string action, std::string device, std::string target = {}) {
    WorkloadAction a;
    a.t = t;
    a.action = std::move(action);
    a.device = std::move(device);
    a.target = std::move(target);
    return a;
}

WorkloadAction stream(double from, double until, DataType type, double chunk_bits) {
    WorkloadAction a = act(from, "stream", "a", "b");
    a.until = until;
    a.data_type = std::string(linkmodel::to_string(type));
    a.size_bits = chunk_bits;
    return a;
}

std::string range_label(RangeClass r) { return std::string(r.name()); }

}  // namespace

std::vector<DeviceSpec> ScenarioConfig::devices() const {
    std::vector<DeviceSpec> out = custom_devices;
    const int total = std::max<int>(device_count, static_cast<int>(custom_devices.size()));
    const int width = std::max<int>(2, static_cast<int>(std::to_string(std::max(total - 1, 0)).size()));
    for (int i = static_cast<int>(custom_devices.size()); i < total; ++i) {
        std::string num = std::to_string(i);
        DeviceSpec d;
        d.id = "d" + std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(num.size()))), '0') + num;
        out.push_back(std::move(d));
    }
    for (auto& d : out) {
        if (uplink_all) d.uplink = true;
        if (d.net_config.empty()) d.net_config = net_config;
    }
    return out;
}

std::vector<std::string> ScenarioConfig::violations() const {
    std::vector<std::string> v;
    if (!(duration > 0.0)) v.push_back("duration must be > 0");
    if (!(dt > 0.0)) v.push_back("dt must be > 0");
    if (dt > duration) v.push_back("dt must not exceed duration");
    if (!(arena.width > 0.0) || !(arena.height > 0.0)) v.push_back("arena width and height must be > 0");
    if (!(overhead >= 0.0 && overhead <= 0.5)) v.push_back("overhead must lie in [0, 0.5]");
    for (const auto& r : rates.violations()) v.push_back("rates: " + r);
    try {
        mobility.validate();
    } catch (const Error& e) {
        v.push_back(std::string("mobility: ") + e.what());
    }
    if (!(accept_delay > 0.0)) v.push_back("handshake.accept_delay must be > 0");
    if (!(confirm_timeout > accept_delay)) v.push_back("handshake.confirm_timeout must exceed accept_delay");
    if (!(relay_latency >= 0.0)) v.push_back("cloud.relay_latency must be >= 0");
    if (device_count < 1 && custom_devices.empty()) v.push_back("devices.count must be >= 1");
    if (net_config.empty()) v.push_back("devices.net_config must not be empty");

    if (!(experiment.epsilon_k > 0.0 && experiment.epsilon_k <= 1.0)) v.push_back("experiment.epsilon_k must lie in (0, 1]");
    if (!(experiment.interval > 0.0)) v.push_back("experiment.interval must be > 0");
    if (!(experiment.period > 0.0)) v.push_back("experiment.period must be > 0");
    if (!(experiment.message_bits > 0.0)) v.push_back("experiment.message_bits must be > 0");
    if (!(connectivity.sigma > 0.0) || !(connectivity.alpha > 0.0)) v.push_back("connectivity sigma and alpha must be > 0");
    if (!(entropy_weight.alpha_k > 0.0) || !(entropy_weight.beta > 0.0)) v.push_back("entropy alpha_k and beta must be > 0");
    if (entropy_weight.chi_dof && !(*entropy_weight.chi_dof > 0.0)) v.push_back("entropy.chi_dof must be > 0");
    if (!(entropy_weight.chi_x >= 0.0)) v.push_back("entropy.chi_x must be >= 0");

    std::set<std::string> ids;
    const auto devs = devices();
    for (const auto& d : devs) {
        if (d.id.empty()) v.push_back("device ids must not be empty");
        if (d.id == "all") v.push_back("\"all\" is reserved and cannot be a device id");
        if (!ids.insert(d.id).second) v.push_back("duplicate device id " + d.id);
        if ((d.x && (*d.x < 0.0 || *d.x > arena.width)) || (d.y && (*d.y < 0.0 || *d.y > arena.height)))
            v.push_back("device " + d.id + " is placed outside the arena");
    }

    for (std::size_t i = 0; i < workload.size(); ++i) {
        const auto& a = workload[i];
        const std::string where = "workload[" + std::to_string(i) + "] (" + a.action + ")";
        if (kActions.count(a.action) == 0) {
            v.push_back(where + ": unknown action");
            continue;
        }
        if (!(a.t >= 0.0 && a.t <= duration)) v.push_back(where + ": t must lie in [0, duration]");
        if (a.action != "relay" && a.device != "all" && ids.count(a.device) == 0)
            v.push_back(where + ": unknown device '" + a.device + "'");
        if (needs_target(a.action) && ids.count(a.target) == 0) v.push_back(where + ": unknown target '" + a.target + "'");
        if (needs_payload(a.action)) {
            if (!linkmodel::parse_data_type(a.data_type)) v.push_back(where + ": unknown data_type '" + a.data_type + "'");
            if (!(a.size_bits > 0.0)) v.push_back(where + ": size_bits must be > 0");
        }
        if (a.action == "stream" && !(a.until > a.t)) v.push_back(where + ": until must be later than t");
        if (a.action == "discover" && !linkmodel::parse_channel(a.channel))
            v.push_back(where + ": unknown channel '" + a.channel + "'");
        if (a.action == "relay" && (a.src_manet.empty() || a.dst_manet.empty()))
            v.push_back(where + ": src_manet and dst_manet are required");
    }
    return v;
}

void ScenarioConfig::validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
}

ScenarioConfig parse_scenario(std::string_view toml_text, const std::filesystem::path& base_dir) {
    toml::table doc;
    try {
        doc = toml::parse(toml_text);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "TOML syntax error at line " << e.source().begin.line << ": " << e.description();
        throw ValidationError({msg.str()});
    }

    std::vector<std::string> errors;
    Reader r(errors);
    ScenarioConfig c;
    r.check_keys(doc, "top level",
                 {"name", "seed", "duration", "dt", "range", "overhead", "rate_table", "rates", "arena", "lifetime",
                  "handshake", "cloud", "mobility", "devices", "experiment", "connectivity", "entropy", "workload"});
    r.string(doc, "name", c.name, "top");
    std::int64_t seed = static_cast<std::int64_t>(c.seed);
    r.integer(doc, "seed", seed, "top");
    if (seed < 0) r.error("seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    r.number(doc, "duration", c.duration, "top");
    r.number(doc, "dt", c.dt, "top");
    r.number(doc, "overhead", c.overhead, "top");
    std::string range = range_label(c.range);
    r.string(doc, "range", range, "top");
    if (const auto rc = RangeClass::parse(range)) {
        c.range = *rc;
    } else {
        r.error("range must be one of 50m, 100m, 200m");
    }

    std::string rate_path;
    r.string(doc, "rate_table", rate_path, "top");
    if (!rate_path.empty()) {
        std::filesystem::path p(rate_path);
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        try {
            c.rates = linkmodel::RateTable::load_csv(p);
        } catch (const ValidationError& e) {
            for (const auto& v : e.violations()) r.error("rate_table: " + v);
        }
    }
    if (const auto* t = r.table(doc, "rates")) read_rates(r, *t, c);

    if (const auto* t = r.table(doc, "arena")) {
        r.check_keys(*t, "[arena]", {"width", "height"});
        r.number(*t, "width", c.arena.width, "arena");
        r.number(*t, "height", c.arena.height, "arena");
    }
    if (const auto* t = r.table(doc, "lifetime")) {
        r.check_keys(*t, "[lifetime]", {"mu", "sigma", "median"});
        double mu = c.lifetime.mu();
        double sigma = c.lifetime.sigma();
        double median = 0.0;
        r.number(*t, "mu", mu, "lifetime");
        r.number(*t, "sigma", sigma, "lifetime");
        if (t->contains("median")) {
            r.number(*t, "median", median, "lifetime");
            if (median > 0.0) {
                mu = std::log(median);
            } else {
                r.error("lifetime.median must be > 0");
            }
        }
        try {
            c.lifetime = numerics::LogNormalParams(mu, sigma);
        } catch (const Error& e) {
            r.error(std::string("lifetime: ") + e.what());
        }
    }
    if (const auto* t = r.table(doc, "handshake")) {
        r.check_keys(*t, "[handshake]", {"accept_delay", "confirm_timeout"});
        r.number(*t, "accept_delay", c.accept_delay, "handshake");
        r.number(*t, "confirm_timeout", c.confirm_timeout, "handshake");
    }
    if (const auto* t = r.table(doc, "cloud")) {
        r.check_keys(*t, "[cloud]", {"relay_latency"});
        r.number(*t, "relay_latency", c.relay_latency, "cloud");
    }
    if (const auto* t = r.table(doc, "mobility")) read_mobility(r, *t, c.mobility);
    if (const auto* t = r.table(doc, "devices")) read_devices(r, *t, c);
    if (const auto* t = r.table(doc, "experiment")) {
        r.check_keys(*t, "[experiment]", {"enabled", "epsilon_k", "interval", "period", "message_bits", "data_type"});
        r.boolean(*t, "enabled", c.experiment.enabled, "experiment");
        r.number(*t, "epsilon_k", c.experiment.epsilon_k, "experiment");
        r.number(*t, "interval", c.experiment.interval, "experiment");
        r.number(*t, "period", c.experiment.period, "experiment");
        r.number(*t, "message_bits", c.experiment.message_bits, "experiment");
        std::string type(linkmodel::to_string(c.experiment.data_type));
        r.string(*t, "data_type", type, "experiment");
        if (const auto dt = linkmodel::parse_data_type(type)) {
            c.experiment.data_type = *dt;
        } else {
            r.error("experiment.data_type '" + type + "' is not a data type");
        }
    }
    if (const auto* t = r.table(doc, "connectivity")) {
        r.check_keys(*t, "[connectivity]", {"sigma", "alpha"});
        r.number(*t, "sigma", c.connectivity.sigma, "connectivity");
        r.number(*t, "alpha", c.connectivity.alpha, "connectivity");
    }
    if (const auto* t = r.table(doc, "entropy")) {
        r.check_keys(*t, "[entropy]", {"alpha_k", "beta", "chi_dof", "chi_x"});
        r.number(*t, "alpha_k", c.entropy_weight.alpha_k, "entropy");
        r.number(*t, "beta", c.entropy_weight.beta, "entropy");
        if (t->contains("chi_dof")) {
            double dof = 0.0;
            r.number(*t, "chi_dof", dof, "entropy");
            c.entropy_weight.chi_dof = dof;
        }
        r.number(*t, "chi_x", c.entropy_weight.chi_x, "entropy");
    }
    if (const auto* arr = r.array(doc, "workload")) read_workload(r, *arr, c);

    for (auto& v : c.violations()) errors.push_back(std::move(v));
    if (!errors.empty()) throw ValidationError(std::move(errors));
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    return parse_scenario(text, path.parent_path());
}

std::string to_toml(const ScenarioConfig& c) {
    toml::table doc;
    doc.insert("name", c.name);
    doc.insert("seed", static_cast<std::int64_t>(c.seed));
    doc.insert("duration", c.duration);
    doc.insert("dt", c.dt);
    doc.insert("range", range_label(c.range));
    doc.insert("overhead", c.overhead);

    toml::table rates;
    for (DataType type : linkmodel::kDataTypes) {
        toml::array row;
        for (RangeLabel l : linkmodel::kRangeLabels) row.push_back(c.rates.mbps(type, RangeClass(l)));
        rates.insert(std::string(linkmodel::to_string(type)), std::move(row));
    }
    doc.insert("rates", std::move(rates));
    doc.insert("arena", toml::table{{"width", c.arena.width}, {"height", c.arena.height}});
    doc.insert("lifetime", toml::table{{"mu", c.lifetime.mu()}, {"sigma", c.lifetime.sigma()}});
    doc.insert("handshake", toml::table{{"accept_delay", c.accept_delay}, {"confirm_timeout", c.confirm_timeout}});
    doc.insert("cloud", toml::table{{"relay_latency", c.relay_latency}});
    doc.insert("mobility", toml::table{{"lambda", c.mobility.lambda},
                                       {"mean_speed", c.mobility.mean_speed},
                                       {"speed_sigma", c.mobility.speed_sigma},
                                       {"max_speed", c.mobility.max_speed},
                                       {"mean_direction", c.mobility.mean_direction},
                                       {"direction_sigma", c.mobility.direction_sigma}});

    toml::table devices{{"count", c.device_count},
                        {"net_config", c.net_config},
                        {"uplink", c.uplink_all ? "all" : "none"}};
    if (!c.custom_devices.empty()) {
        toml::array custom;
        for (const auto& d : c.custom_devices) {
            toml::table t{{"id", d.id}, {"uplink", d.uplink}, {"stationary", d.stationary}};
            if (d.x) t.insert("x", *d.x);
            if (d.y) t.insert("y", *d.y);
            if (d.direction) t.insert("direction", *d.direction);
            if (!d.net_config.empty()) t.insert("net_config", d.net_config);
            custom.push_back(std::move(t));
        }
        devices.insert("custom", std::move(custom));
    }
    doc.insert("devices", std::move(devices));

    doc.insert("experiment", toml::table{{"enabled", c.experiment.enabled},
                                         {"epsilon_k", c.experiment.epsilon_k},
                                         {"interval", c.experiment.interval},
                                         {"period", c.experiment.period},
                                         {"message_bits", c.experiment.message_bits},
                                         {"data_type", std::string(linkmodel::to_string(c.experiment.data_type))}});
    doc.insert("connectivity", toml::table{{"sigma", c.connectivity.sigma}, {"alpha", c.connectivity.alpha}});
    toml::table entropy{{"alpha_k", c.entropy_weight.alpha_k}, {"beta", c.entropy_weight.beta}, {"chi_x", c.entropy_weight.chi_x}};
    if (c.entropy_weight.chi_dof) entropy.insert("chi_dof", *c.entropy_weight.chi_dof);
    doc.insert("entropy", std::move(entropy));

    if (!c.workload.empty()) {
        toml::array workload;
        for (const auto& a : c.workload) {
            toml::table t{{"t", a.t}, {"action", a.action}};
            if (!a.device.empty()) t.insert("device", a.device);
            if (!a.target.empty()) t.insert("target", a.target);
            if (!a.password.empty()) t.insert("password", a.password);
            if (a.action == "discover") t.insert("channel", a.channel);
            if (needs_payload(a.action)) {
                t.insert("data_type", a.data_type);
                t.insert("size_bits", a.size_bits);
            }
            if (a.action == "stream") t.insert("until", a.until);
            if (a.action == "uplink") t.insert("on", a.on);
            if (!a.net_config.empty()) t.insert("net_config", a.net_config);
            if (!a.src_manet.empty()) t.insert("src_manet", a.src_manet);
            if (!a.dst_manet.empty()) t.insert("dst_manet", a.dst_manet);
            workload.push_back(std::move(t));
        }
        doc.insert("workload", std::move(workload));
    }

    std::ostringstream out;
    out << doc << "\n";
    return out.str();
}

std::vector<std::string> preset_names() { return {"table1", "table2", "table3", "table4", "table5", "relay-demo"}; }

ScenarioConfig traffic_preset(double mean_speed, int devices, double epsilon_k) {
    ScenarioConfig c;
    c.name = "traffic";
    c.seed = 20;
    c.duration = 300.0;
    c.dt = 1.0;
    c.arena = {500.0, 500.0};
    c.range = RangeClass(RangeLabel::R100);
    c.mobility.lambda = 0.75;
    c.mobility.mean_speed = mean_speed;
    c.mobility.speed_sigma = 0.2 * mean_speed;
    c.mobility.direction_sigma = 0.5;
    c.mobility.max_speed = 2.0 * mean_speed;
    c.device_count = devices;
    c.experiment.enabled = true;
    c.experiment.epsilon_k = epsilon_k;
    c.workload = {act(0.0, "register", "all"), act(0.0, "login", "all"), act(0.0, "start", "all")};
    return c;
}

ScenarioConfig throughput_preset(RangeClass range) {
    // Two stationary devices inside the range class's band, so the link
    // stays up and every chunk runs at the calibrated rate.
    double separation = 30.0;
    if (range.label() == RangeLabel::R100) separation = 75.0;
    if (range.label() == RangeLabel::R200) separation = 150.0;

    ScenarioConfig c;
    c.name = "throughput-" + range_label(range);
    c.seed = 7;
    c.duration = 250.0;
    c.arena = {500.0, 500.0};
    c.range = range;
    c.device_count = 2;
    DeviceSpec a;
    a.id = "a";
    a.x = 100.0;
    a.y = 250.0;
    a.stationary = true;
    DeviceSpec b = a;
    b.id = "b";
    b.x = 100.0 + separation;
    c.custom_devices = {a, b};

    constexpr double kChunk = 1e6;
    c.workload = {act(0.0, "register", "all"),
                  act(0.1, "login", "all"),
                  act(0.2, "start", "all"),
                  act(0.5, "discover", "a"),
                  act(1.0, "connect", "a", "b"),
                  stream(2.0, 62.0, DataType::Text, kChunk),
                  stream(62.0, 122.0, DataType::Image, kChunk),
                  stream(122.0, 182.0, DataType::Voice, kChunk),
                  stream(182.0, 242.0, DataType::Video, kChunk)};
    return c;
}

ScenarioConfig preset(std::string_view name) {
    if (name == "table1" || name == "table2") {
        ScenarioConfig c = traffic_preset(name == "table1" ? 50.0 : 100.0, 10, 1.0);
        c.name = std::string(name);
        return c;
    }
    if (name == "table3" || name == "table4" || name == "table5") {
        const RangeLabel label = name == "table3" ? RangeLabel::R50 : name == "table4" ? RangeLabel::R100 : RangeLabel::R200;
        ScenarioConfig c = throughput_preset(RangeClass(label));
        c.name = std::string(name);
        return c;
    }
    if (name == "relay-demo") {
        ScenarioConfig c;
        c.name = "relay-demo";
        c.seed = 3;
        c.duration = 20.0;
        c.arena = {300.0, 300.0};
        c.device_count = 4;
        auto place = [](std::string id, double x, double y, bool uplink, std::string net) {
            DeviceSpec d;
            d.id = std::move(id);
            d.x = x;
            d.y = y;
            d.uplink = uplink;
            d.stationary = true;
            d.net_config = std::move(net);
            return d;
        };
        c.custom_devices = {place("a", 20, 20, true, "m1"), place("b", 40, 20, false, "m1"),
                            place("c", 260, 260, true, "m2"), place("d", 280, 260, false, "m2")};
        auto relay = [](double t, double bits) {
            WorkloadAction a = act(t, "relay", "");
            a.src_manet = "m1";
            a.dst_manet = "m2";
            a.data_type = "Image";
            a.size_bits = bits;
            return a;
        };
        WorkloadAction off = act(1.5, "uplink", "c");
        off.on = false;
        WorkloadAction on = act(2.5, "uplink", "c");
        c.workload = {act(0.0, "register", "all"), act(0.1, "login", "all"), act(0.2, "start", "all"),
                      act(0.5, "session", "all"),  relay(1.0, 8e6),           off,
                      on,                          relay(3.0, 8e6)};
        return c;
    }
    throw Error(Errc::InvalidArgument, "unknown preset '" + std::string(name) + "'");
}

}  // namespace cmanet
