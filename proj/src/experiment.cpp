#include "orbit/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "orbit/evolution.hpp"
#include "orbit/graph_oracle.hpp"
#include "orbit/instances.hpp"
#include "orbit/knuth_bendix.hpp"
#include "orbit/tasks.hpp"

namespace orbit {

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

ordered_json jnum(double v) {
    if (std::isnan(v)) return nullptr;
    ordered_json j;
    double back = 0;
    std::sscanf(fmt(v).c_str(), "%lf", &back);
    if (back == static_cast<long long>(back) && std::fabs(back) < 9e15)
        return static_cast<long long>(back);
    return back;
}

struct CellOut {
    std::vector<std::string> records;  // JSON lines
    std::map<std::string, std::vector<std::string>> rows;
    std::map<std::string, std::string> manifest_extra;
    std::string failure;
    double wall = 0;
};

int jobs_from_env() {
    const char* e = std::getenv("ORBIT_JOBS");
    if (!e) return 1;
    int j = std::atoi(e);
    return j < 1 ? 1 : j;
}

std::vector<CellOut> run_cells(int n, const std::function<CellOut(int)>& fn) {
    std::vector<CellOut> out(static_cast<std::size_t>(n));
    int jobs = std::min(jobs_from_env(), std::max(1, n));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n) return;
            auto t0 = std::chrono::steady_clock::now();
            try {
                out[static_cast<std::size_t>(i)] = fn(i);
            } catch (const std::exception& e) {
                out[static_cast<std::size_t>(i)].failure = e.what();
            }
            out[static_cast<std::size_t>(i)].wall =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return out;
}

long mps_bytes(const MPS& x) {
    long total = 0;
    for (const auto& s : x.sites) total += static_cast<long>(s.size()) * 8;
    return total;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open preset '" + path + "'");
    ordered_json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw DataError("bad preset JSON: " + std::string(e.what()));
    }
    ExperimentConfig c;
    c.name = j.value("name", std::string{});
    c.kind = j.value("kind", std::string{});
    c.system_text = j.value("system", std::string{});
    c.L_list = j.value("L", std::vector<int>{});
    c.taus = j.value("tau", std::vector<double>{});
    c.chis = j.value("chi", std::vector<int>{});
    c.dt = j.value("dt", 0.5);
    c.eps_energy = j.value("eps_D", 2e-4);
    c.eps_nc = j.value("eps_NC", 0.05);
    c.n_samples = j.value("n_S", 1000);
    c.per_set = j.value("per_set", 2);
    c.seed = j.value("seed", static_cast<std::uint64_t>(1));
    c.orders = j.value("orders", std::vector<std::string>{});
    c.notes = j.value("notes", std::string{});
    if (c.kind.empty()) throw DataError("preset is missing 'kind'");
    return c;
}

void run_experiment(const ExperimentConfig& cfg, const std::string& outdir) {
    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    RewriteSystem sys = parse_system(cfg.system_text);
    auto t_start = std::chrono::steady_clock::now();
    auto wallclock = std::chrono::system_clock::now();

    std::map<std::string, std::string> headers;
    std::vector<CellOut> cells;

    AnnealSchedule base;
    base.dt = cfg.dt;
    base.eps_energy = cfg.eps_energy;
    base.eps_nc = cfg.eps_nc;
    base.n_samples = cfg.n_samples;

    if (cfg.kind == "quality") {
        headers["quality.csv"] = "L,word,tau,chi,E_D,p_NC,accepted";
        headers["resources.csv"] = "L,word,tau,chi,max_bond,mps_bytes";
        struct Cell {
            int L;
            Word w;
            double tau;
            int chi;
        };
        std::vector<Cell> plan;
        for (int L : cfg.L_list) {
            InstanceSet inst = generate_instances(sys, L, cfg.per_set, cfg.seed + static_cast<std::uint64_t>(L));
            std::vector<Word> words = inst.set1;
            words.insert(words.end(), inst.set2.begin(), inst.set2.end());
            for (const auto& w : words)
                for (double tau : cfg.taus)
                    for (int chi : cfg.chis) plan.push_back({L, w, tau, chi});
        }
        cells = run_cells(static_cast<int>(plan.size()), [&](int i) {
            const Cell& c = plan[static_cast<std::size_t>(i)];
            AnnealSchedule s = base;
            s.tau = c.tau;
            s.chi = c.chi;
            s.seed = cfg.seed;
            AnnealResult r = run_iqa(sys, c.w, s);
            CellOut o;
            ordered_json j;
            j["kind"] = "quality";
            j["L"] = c.L;
            j["word"] = c.w;
            j["tau"] = jnum(c.tau);
            j["chi"] = c.chi;
            j["E_D"] = jnum(r.gate.energy);
            j["p_NC"] = jnum(r.gate.p_nc);
            j["accepted"] = r.gate.accepted;
            j["max_bond"] = r.state.max_bond();
            j["mps_bytes"] = mps_bytes(r.state);
            j["seed"] = cfg.seed;
            o.records.push_back(j.dump());
            o.rows["quality.csv"].push_back(
                std::to_string(c.L) + "," + c.w + "," + fmt(c.tau) + "," + std::to_string(c.chi) +
                "," + fmt(r.gate.energy) + "," + fmt(r.gate.p_nc) + "," +
                (r.gate.accepted ? "1" : "0"));
            o.rows["resources.csv"].push_back(
                std::to_string(c.L) + "," + c.w + "," + fmt(c.tau) + "," + std::to_string(c.chi) +
                "," + std::to_string(r.state.max_bond()) + "," + std::to_string(mps_bytes(r.state)));
            return o;
        });
    } else if (cfg.kind == "entanglement") {
        headers["entropy.csv"] = "L,word,cut,entropy_bits";
        headers["schmidt.csv"] = "L,word,index,value";
        cells = run_cells(static_cast<int>(cfg.L_list.size()), [&](int i) {
            int L = cfg.L_list[static_cast<std::size_t>(i)];
            InstanceSet inst = generate_instances(sys, L, 1, cfg.seed + static_cast<std::uint64_t>(L));
            Word w = inst.set1[0];
            AnnealSchedule s = base;
            s.seed = cfg.seed;
            PreparedOrbit p = prepare_orbit_escalating(sys, w, s, cfg.taus, cfg.chis);
            CellOut o;
            double max_entropy = 0;
            for (int cut = 1; cut < L; ++cut) {
                auto sp = schmidt_spectrum(p.state, cut);
                double e = entropy_bits(sp);
                max_entropy = std::max(max_entropy, e);
                o.rows["entropy.csv"].push_back(std::to_string(L) + "," + w + "," +
                                                std::to_string(cut) + "," + fmt(e));
            }
            auto central = schmidt_spectrum(p.state, L / 2);
            for (std::size_t k = 0; k < central.values.size(); ++k)
                o.rows["schmidt.csv"].push_back(std::to_string(L) + "," + w + "," +
                                                std::to_string(k) + "," + fmt(central.values[k]));
            ordered_json j;
            j["kind"] = "entanglement";
            j["L"] = L;
            j["word"] = w;
            j["tau"] = jnum(p.tau);
            j["chi"] = p.chi;
            j["accepted"] = p.gate.accepted;
            j["max_entropy"] = jnum(max_entropy);
            j["seed"] = cfg.seed;
            o.records.push_back(j.dump());
            return o;
        });
    } else if (cfg.kind == "gap") {
        headers["gap.csv"] = "L,gap";
        cells = run_cells(static_cast<int>(cfg.L_list.size()), [&](int i) {
            int L = cfg.L_list[static_cast<std::size_t>(i)];
            GapRecord g = spectral_gap(sys, L);
            CellOut o;
            o.rows["gap.csv"].push_back(std::to_string(L) + "," + fmt(g.gap));
            ordered_json j;
            j["kind"] = "gap";
            j["L"] = L;
            j["gap"] = jnum(g.gap);
            o.records.push_back(j.dump());
            return o;
        });
        // append the fit over whatever succeeded
        std::vector<GapRecord> recs;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (cells[i].failure.empty())
                recs.push_back({cfg.L_list[i],
                                std::stod(cells[i].rows["gap.csv"][0].substr(
                                    cells[i].rows["gap.csv"][0].find(',') + 1))});
        if (recs.size() >= 4) {
            GapFit fit = fit_gap_scaling(recs);
            CellOut o;
            headers["gap_fit.csv"] =
                "poly_exponent,poly_prefactor,poly_residual,exp_rate,exp_prefactor,exp_residual";
            o.rows["gap_fit.csv"].push_back(fmt(fit.poly_exponent) + "," + fmt(fit.poly_prefactor) +
                                            "," + fmt(fit.poly_residual) + "," + fmt(fit.exp_rate) +
                                            "," + fmt(fit.exp_prefactor) + "," +
                                            fmt(fit.exp_residual));
            ordered_json j;
            j["kind"] = "gap_fit";
            j["poly_exponent"] = jnum(fit.poly_exponent);
            j["poly_residual"] = jnum(fit.poly_residual);
            j["exp_rate"] = jnum(fit.exp_rate);
            j["exp_residual"] = jnum(fit.exp_residual);
            o.records.push_back(j.dump());
            cells.push_back(std::move(o));
        }
    } else if (cfg.kind == "wordcount") {
        headers["word.csv"] = "L,w1,w2,fidelity,verdict,kb_truth";
        headers["count.csv"] = "L,word,count_observable,count_uniform,exact";
        cells = run_cells(static_cast<int>(cfg.L_list.size()), [&](int i) {
            int L = cfg.L_list[static_cast<std::size_t>(i)];
            InstanceSet inst =
                generate_instances(sys, L, cfg.per_set, cfg.seed + static_cast<std::uint64_t>(L));
            std::vector<Word> words = inst.set1;
            words.insert(words.end(), inst.set2.begin(), inst.set2.end());
            TermOrder order{sys.alphabet.symbols};
            auto [cs, metrics] = complete(sys, order, L);
            (void)metrics;
            AnnealSchedule s = base;
            s.seed = cfg.seed;
            std::vector<PreparedOrbit> preps;
            for (const auto& w : words)
                preps.push_back(prepare_orbit_escalating(sys, w, s, cfg.taus, cfg.chis));
            CellOut o;
            for (std::size_t a = 0; a < preps.size(); ++a)
                for (std::size_t b = a + 1; b < preps.size(); ++b) {
                    TaskResult r = word_problem(sys, preps[a], preps[b]);
                    bool truth = word_problem_kb(cs, words[a], words[b]);
                    o.rows["word.csv"].push_back(std::to_string(L) + "," + words[a] + "," +
                                                 words[b] + "," + fmt(r.value) + "," + r.verdict +
                                                 "," + (truth ? "connected" : "disconnected"));
                    o.records.push_back(r.to_json());
                }
            for (std::size_t a = 0; a < preps.size(); ++a) {
                TaskResult r = count_class(sys, preps[a]);
                auto cls = enumerate_class(sys, words[a]);
                std::string exact = cls.truncated ? "" : std::to_string(cls.size());
                o.rows["count.csv"].push_back(std::to_string(L) + "," + words[a] + "," +
                                              fmt(r.value) + "," + fmt(r.value2.value_or(r.value)) +
                                              "," + exact);
                o.records.push_back(r.to_json());
            }
            return o;
        });
    } else if (cfg.kind == "kbbench") {
        headers["kb.csv"] = "L,order,rule_count,total_rule_size";
        std::vector<std::string> orders = cfg.orders;
        if (orders.empty()) orders.push_back(sys.alphabet.symbols);
        struct Cell {
            int L;
            std::string order;
        };
        std::vector<Cell> plan;
        for (int L : cfg.L_list)
            for (const auto& o : orders) plan.push_back({L, o});
        cells = run_cells(static_cast<int>(plan.size()), [&](int i) {
            const Cell& c = plan[static_cast<std::size_t>(i)];
            auto rows = benchmark_completion(sys, {c.L}, {TermOrder{c.order}});
            CellOut o;
            const BenchRow& r = rows[0];
            o.rows["kb.csv"].push_back(std::to_string(r.L) + "," + r.order + "," +
                                       std::to_string(r.rule_count) + "," +
                                       std::to_string(r.total_rule_size));
            o.manifest_extra["seconds"] = fmt(r.seconds);  // timing is manifest-only
            ordered_json j;
            j["kind"] = "kbbench";
            j["L"] = r.L;
            j["order"] = r.order;
            j["rule_count"] = r.rule_count;
            j["total_rule_size"] = r.total_rule_size;
            o.records.push_back(j.dump());
            return o;
        });
    } else {
        throw DataError("unknown experiment kind '" + cfg.kind + "'");
    }

    // deterministic outputs
    {
        std::ofstream rec(fs::path(outdir) / "records.jsonl");
        for (const auto& c : cells)
            for (const auto& line : c.records) rec << line << "\n";
    }
    std::map<std::string, std::vector<std::string>> files;
    for (const auto& [name, header] : headers) files[name];  // header-only when empty
    for (const auto& c : cells)
        for (const auto& [name, rows] : c.rows)
            files[name].insert(files[name].end(), rows.begin(), rows.end());
    for (const auto& [name, rows] : files) {
        std::ofstream f(fs::path(outdir) / name);
        auto h = headers.find(name);
        if (h != headers.end()) f << h->second << "\n";
        for (const auto& r : rows) f << r << "\n";
    }

    // manifest (wall times and timestamps live here only)
    ordered_json manifest;
    manifest["name"] = cfg.name;
    manifest["kind"] = cfg.kind;
    manifest["seed"] = cfg.seed;
    manifest["notes"] = cfg.notes;
    manifest["started_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(wallclock.time_since_epoch()).count();
    manifest["total_wall_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    ordered_json jcells = ordered_json::array();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        ordered_json j;
        j["cell"] = i;
        j["wall_s"] = cells[i].wall;
        if (!cells[i].failure.empty()) j["failure"] = cells[i].failure;
        for (const auto& [k, v] : cells[i].manifest_extra) j[k] = v;
        jcells.push_back(j);
    }
    manifest["cells"] = jcells;
    std::ofstream mf(fs::path(outdir) / "manifest.json");
    mf << manifest.dump(2) << "\n";
}

}  // namespace orbit
