#include "growth/modelfile.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace growth::modelfile {

using nlohmann::json;

namespace {

std::string configToString(const GrowthModel& m, const LocalConfig& c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ",";
        out += m.labelOf(c[i]);
    }
    return out;
}

LocalConfig configFromString(const GrowthModel& m, const std::string& s, int arity) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (static_cast<int>(parts.size()) != arity)
        throw ModelError("configuration '" + s + "' has " + std::to_string(parts.size()) +
                         " entries, template has " + std::to_string(arity));
    LocalConfig out(arity);
    for (int i = 0; i < arity; ++i) {
        auto it = std::find(m.typeLabels.begin(), m.typeLabels.end(), parts[i]);
        if (it == m.typeLabels.end()) throw ModelError("unknown type label '" + parts[i] + "'");
        out[i] = static_cast<TypeId>(it - m.typeLabels.begin());
    }
    return out;
}

// Transitive reduction of the order: covers only.
std::vector<std::pair<int, int>> coversOf(const TypeLattice& lat) {
    std::vector<std::pair<int, int>> covers;
    const int n = lat.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !lat.leq(a, b)) continue;
            bool direct = true;
            for (int c = 0; c < n && direct; ++c)
                if (c != a && c != b && lat.leq(a, c) && lat.leq(c, b)) direct = false;
            if (direct) covers.push_back({a, b});
        }
    return covers;
}

}  // namespace

std::string saveToString(const GrowthModel& m) {
    json j;
    j["format"] = kFormat;
    j["name"] = m.name;

    json lattice;
    lattice["labels"] = m.typeLabels;
    json covers = json::array();
    for (auto [a, b] : coversOf(m.lattice)) covers.push_back({a, b});
    lattice["covers"] = covers;
    j["lattice"] = lattice;

    json geometry;
    if (m.geometry.graphSites > 0) {
        geometry["sites"] = m.geometry.graphSites;
    } else {
        geometry["dim"] = m.geometry.dim;
        geometry["sides"] = m.geometry.sides;
    }
    j["geometry"] = geometry;

    json mappings = json::array();
    for (const auto& e : m.events.mappings) {
        json me;
        if (e.sites.translationInvariant)
            me["offsets"] = e.sites.offsets;
        else
            me["sites"] = e.sites.sites;
        me["rate"] = e.rate;
        LocalCodec codec(m.lattice.size(), e.arity());
        json table = json::object();
        for (ConfigIndex i = 0; i < codec.tableSize(); ++i) {
            if (e.table[i] == i) continue;
            table[configToString(m, codec.decode(i))] =
                configToString(m, codec.decode(e.table[i]));
        }
        me["table"] = table;
        mappings.push_back(me);
    }
    j["mappings"] = mappings;

    json params = json::object();
    for (const auto& [name, p] : m.parameters) {
        json pj;
        pj["value"] = p.value;
        pj["mappings"] = p.mappings;
        params[name] = pj;
    }
    j["parameters"] = params;
    return j.dump(2) + "\n";
}

GrowthModel loadFromString(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.contains("format") || j["format"] != kFormat)
        throw ModelError("unsupported model file format; expected " + std::string(kFormat));

    GrowthModel m;
    m.name = j.value("name", "");

    const json& lj = j.at("lattice");
    m.typeLabels = lj.at("labels").get<std::vector<std::string>>();
    const int n = static_cast<int>(m.typeLabels.size());
    std::vector<std::pair<int, int>> covers;
    for (const auto& c : lj.at("covers")) {
        if (!c.is_array() || c.size() != 2) throw ModelError("covers must be [a,b] pairs");
        covers.push_back({c[0].get<int>(), c[1].get<int>()});
    }
    if (lj.contains("join")) {
        auto joinRows = lj["join"].get<std::vector<std::vector<int>>>();
        std::vector<std::uint8_t> leq(n * n, 0);
        for (int a = 0; a < n; ++a) leq[a * n + a] = 1;
        for (auto [a, b] : covers) {
            if (a < 0 || a >= n || b < 0 || b >= n) throw ModelError("cover out of range");
            leq[a * n + b] = 1;
        }
        for (int k = 0; k < n; ++k)
            for (int a = 0; a < n; ++a)
                if (leq[a * n + k])
                    for (int b = 0; b < n; ++b)
                        if (leq[k * n + b]) leq[a * n + b] = 1;
        std::vector<TypeId> join(n * n);
        if (static_cast<int>(joinRows.size()) != n) throw ModelError("join table must be NxN");
        for (int a = 0; a < n; ++a) {
            if (static_cast<int>(joinRows[a].size()) != n) throw ModelError("join table must be NxN");
            for (int b = 0; b < n; ++b) join[a * n + b] = static_cast<TypeId>(joinRows[a][b]);
        }
        Report r = validateLattice(n, leq, join);
        if (!r.ok()) throw ModelError("declared join table invalid: " + r.summary());
        m.lattice = TypeLattice::fromTables(n, std::move(leq), std::move(join));
    } else {
        m.lattice = TypeLattice::fromCovers(n, covers);
    }

    if (j.contains("geometry")) {
        const json& gj = j["geometry"];
        if (gj.contains("sites")) {
            m.geometry.graphSites = gj["sites"].get<std::uint32_t>();
        } else {
            m.geometry.dim = gj.value("dim", 1);
            if (gj.contains("sides")) m.geometry.sides = gj["sides"].get<std::vector<int>>();
        }
    }

    for (const auto& me : j.at("mappings")) {
        SiteTemplate tmpl;
        if (me.contains("offsets")) {
            tmpl = SiteTemplate::fromOffsets(me["offsets"].get<std::vector<std::vector<int>>>());
            for (const auto& off : tmpl.offsets)
                if (static_cast<int>(off.size()) != m.geometry.dim)
                    throw ModelError("offset dimension does not match the geometry");
        } else if (me.contains("sites")) {
            tmpl = SiteTemplate::fromSites(me["sites"].get<std::vector<std::uint32_t>>());
        } else {
            throw ModelError("mapping needs offsets or sites");
        }
        double rate = me.at("rate").get<double>();
        const int arity = tmpl.arity();
        LocalCodec codec(n, arity);
        std::vector<ConfigIndex> table(codec.tableSize());
        for (ConfigIndex i = 0; i < table.size(); ++i) table[i] = i;
        if (me.contains("table")) {
            for (auto it = me["table"].begin(); it != me["table"].end(); ++it) {
                LocalConfig from = configFromString(m, it.key(), arity);
                LocalConfig to = configFromString(m, it.value().get<std::string>(), arity);
                table[codec.encode(from)] = codec.encode(to);
            }
        } else if (me.contains("rule")) {
            LocalConfig from = configFromString(m, me["rule"].at("from").get<std::string>(), arity);
            LocalConfig to = configFromString(m, me["rule"].at("to").get<std::string>(), arity);
            table[codec.encode(from)] = codec.encode(to);
        } else {
            throw ModelError("mapping needs a table or a rule");
        }
        m.events.mappings.push_back(makeMapping(m.lattice, std::move(tmpl), std::move(table), rate));
    }

    if (j.contains("parameters"))
        for (auto it = j["parameters"].begin(); it != j["parameters"].end(); ++it) {
            Parameter p;
            p.value = it.value().at("value").get<double>();
            p.mappings = it.value().at("mappings").get<std::vector<std::uint32_t>>();
            for (auto id : p.mappings)
                if (id >= m.events.mappings.size())
                    throw ModelError("parameter '" + it.key() + "' references unknown mapping");
            m.parameters[it.key()] = std::move(p);
        }

    Report sr = validateStructure(m.lattice, m.events);
    if (!sr.ok()) throw ModelError("invalid event structure: " + sr.summary());
    return m;
}

void save(const GrowthModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot write " + path);
    out << saveToString(m);
}

GrowthModel load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return loadFromString(ss.str());
}

}  // namespace growth::modelfile
