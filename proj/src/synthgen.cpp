#include "ecamp/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "ecamp/csv.hpp"
#include "ecamp/error.hpp"
#include "ecamp/parallel.hpp"
#include "ecamp/records.hpp"

namespace ecamp::synth {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<const char*, 24> kMajorNames{
    "Psychology",
    "Political Science",
    "Journalism & Electronic Media",
    "Communication Studies",
    "Biochemistry & Cellular and Molecular Biology",
    "Computer Science",
    "Mathematics",
    "Mechanical Engineering",
    "Nursing",
    "Accounting",
    "History",
    "English",
    "Chemistry",
    "Physics",
    "Economics",
    "Sociology",
    "Civil Engineering",
    "Electrical Engineering",
    "Finance",
    "Marketing",
    "Art",
    "Music",
    "Philosophy",
    "Kinesiology"};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string zero_pad(long value, int width) {
    std::string s = std::to_string(value);
    if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
    return s;
}

long pow3(int e) {
    long r = 1;
    for (int i = 0; i < e; ++i) r = std::min(r * 3, 1L << 40);
    return r;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<std::vector<std::vector<int>>> generate_schedule(const WorldConfig& cfg, std::mt19937_64& rng) {
    std::vector<int> all(static_cast<std::size_t>(cfg.majors));
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<int>> prev{all};
    std::vector<std::vector<std::vector<int>>> schedule;
    for (int t = 1; t <= cfg.stages; ++t) {
        const int remaining_after = cfg.stages - t;
        std::vector<std::vector<int>> next;
        for (const auto& group : prev) {
            const long g = static_cast<long>(group.size());
            if (g == 1) {
                next.push_back(group);
                continue;
            }
            auto feasible = [&](long b) { return b <= g && (g + b - 1) / b <= pow3(remaining_after); };
            long b = 0;
            std::vector<long> options;
            for (long cand = 2; cand <= 3; ++cand)
                if (feasible(cand)) options.push_back(cand);
            if (feasible(1) && uniform(rng, 0.0, 1.0) >= cfg.split_prob) {
                b = 1;
            } else if (!options.empty()) {
                b = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
            } else {
                b = 2;
                while (!feasible(b)) ++b;
            }
            auto shuffled = group;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            std::vector<std::vector<int>> parts(static_cast<std::size_t>(b));
            for (std::size_t i = 0; i < shuffled.size(); ++i) parts[i % parts.size()].push_back(shuffled[i]);
            for (auto& p : parts) {
                std::sort(p.begin(), p.end());
                next.push_back(std::move(p));
            }
        }
        std::sort(next.begin(), next.end());
        schedule.push_back(next);
        prev = std::move(next);
    }
    return schedule;
}

void validate_schedule(const WorldConfig& cfg) {
    if (static_cast<int>(cfg.schedule.size()) != cfg.stages)
        throw ConfigError("schedule must list one partition per stage");
    std::vector<int> parent_of(static_cast<std::size_t>(cfg.majors), 0);  // root group 0
    for (int t = 1; t <= cfg.stages; ++t) {
        const auto& part = cfg.schedule[static_cast<std::size_t>(t - 1)];
        std::vector<int> group_of(static_cast<std::size_t>(cfg.majors), -1);
        for (std::size_t gi = 0; gi < part.size(); ++gi) {
            if (part[gi].empty()) throw ConfigError("schedule stage " + std::to_string(t) + " has an empty group");
            for (int m : part[gi]) {
                if (m < 0 || m >= cfg.majors)
                    throw ConfigError("schedule stage " + std::to_string(t) + " names unknown major index");
                if (group_of[static_cast<std::size_t>(m)] != -1)
                    throw ConfigError("schedule stage " + std::to_string(t) + " lists a major twice");
                group_of[static_cast<std::size_t>(m)] = static_cast<int>(gi);
            }
            // every member must share the same parent group (refinement)
            for (int m : part[gi])
                if (parent_of[static_cast<std::size_t>(m)] != parent_of[static_cast<std::size_t>(part[gi][0])])
                    throw ConfigError("schedule stage " + std::to_string(t) +
                                      " does not refine the previous stage");
        }
        for (int m = 0; m < cfg.majors; ++m)
            if (group_of[static_cast<std::size_t>(m)] == -1)
                throw ConfigError("schedule stage " + std::to_string(t) + " omits a major");
        parent_of = group_of;
    }
}

} // namespace

void WorldConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid world config: " + what);
    };
    require(majors >= 1, "majors must be >= 1");
    require(students >= 1, "students must be >= 1");
    require(stages >= 1 && stages <= 8, "stages must be in [1, 8]");
    require(gen_ed_courses >= 0 && gen_ed_stages >= 0 && gen_ed_stages <= stages, "gen-ed settings out of range");
    require(group_courses_per_stage >= 1, "group_courses_per_stage must be >= 1");
    require(own_courses_per_stage >= 1, "own_courses_per_stage must be >= 1");
    require(core_k >= 1 && core_k <= own_courses_per_stage * stages, "core_k must be in [1, own curriculum size]");
    require(noise >= 0.0, "noise must be >= 0");
    require(lambda_core > lambda_noncore && lambda_noncore >= 0.0,
            "core loading must exceed the non-core loading");
    require(mu_spread >= 0.0, "mu_spread must be >= 0");
    require(w_rate >= 0.0 && w_rate < 1.0, "w_rate must be in [0, 1)");
    require(withdraw_prob >= 0.0 && withdraw_prob < 1.0, "withdraw_prob must be in [0, 1)");
    require(max_dropout_stage >= 1 && max_dropout_stage <= stages, "max_dropout_stage must be in [1, stages]");
    require(dropout_decay > 0.0, "dropout_decay must be > 0");
    require(partial_load_min > 0.0 && partial_load_min <= 1.0, "partial_load_min must be in (0, 1]");
    require(size_skew >= 0.0 && size_skew < 1.0, "size_skew must be in [0, 1)");
    require(split_prob >= 0.0 && split_prob <= 1.0, "split_prob must be in [0, 1]");
    require(cohort_years >= 1, "cohort_years must be >= 1");
    require(gender_unknown >= 0.0 && gender_unknown <= 1.0, "gender_unknown must be in [0, 1]");
    if (!schedule.empty()) validate_schedule(*this);
}

WorldConfig WorldConfig::table1_scale() {
    WorldConfig c;
    c.majors = 436;
    c.students = 144798;
    c.withdraw_prob = 0.3078;
    c.cohort_years = 13;
    return c;
}

void to_json(json& j, const WorldConfig& c) {
    j = json{{"majors", c.majors},
             {"students", c.students},
             {"stages", c.stages},
             {"gen_ed_courses", c.gen_ed_courses},
             {"gen_ed_stages", c.gen_ed_stages},
             {"group_courses_per_stage", c.group_courses_per_stage},
             {"own_courses_per_stage", c.own_courses_per_stage},
             {"core_k", c.core_k},
             {"noise", c.noise},
             {"lambda_core", c.lambda_core},
             {"lambda_noncore", c.lambda_noncore},
             {"mu_mean", c.mu_mean},
             {"mu_spread", c.mu_spread},
             {"w_rate", c.w_rate},
             {"withdraw_prob", c.withdraw_prob},
             {"max_dropout_stage", c.max_dropout_stage},
             {"dropout_decay", c.dropout_decay},
             {"partial_load_min", c.partial_load_min},
             {"size_skew", c.size_skew},
             {"split_prob", c.split_prob},
             {"first_year", c.first_year},
             {"cohort_years", c.cohort_years},
             {"gender_unknown", c.gender_unknown},
             {"schedule", c.schedule}};
}

void from_json(const json& j, WorldConfig& c) {
    if (!j.is_object()) throw ConfigError("world config must be a JSON object");
    const json defaults = c;
    for (const auto& [k, v] : j.items())
        if (!defaults.contains(k)) throw ConfigError("unknown world config key '" + k + "'");
    try {
        auto take = [&](const char* key, auto& out) {
            if (j.contains(key)) j.at(key).get_to(out);
        };
        take("majors", c.majors);
        take("students", c.students);
        take("stages", c.stages);
        take("gen_ed_courses", c.gen_ed_courses);
        take("gen_ed_stages", c.gen_ed_stages);
        take("group_courses_per_stage", c.group_courses_per_stage);
        take("own_courses_per_stage", c.own_courses_per_stage);
        take("core_k", c.core_k);
        take("noise", c.noise);
        take("lambda_core", c.lambda_core);
        take("lambda_noncore", c.lambda_noncore);
        take("mu_mean", c.mu_mean);
        take("mu_spread", c.mu_spread);
        take("w_rate", c.w_rate);
        take("withdraw_prob", c.withdraw_prob);
        take("max_dropout_stage", c.max_dropout_stage);
        take("dropout_decay", c.dropout_decay);
        take("partial_load_min", c.partial_load_min);
        take("size_skew", c.size_skew);
        take("split_prob", c.split_prob);
        take("first_year", c.first_year);
        take("cohort_years", c.cohort_years);
        take("gender_unknown", c.gender_unknown);
        take("schedule", c.schedule);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("world config: ") + e.what());
    }
}

std::vector<std::string> PlantedWorld::stage_courses(int major, int stage) const {
    std::vector<std::string> out;
    if (stage <= config.gen_ed_stages) out = gen_ed;
    for (const auto& gc : groups) {
        if (gc.stage != stage) continue;
        if (std::binary_search(gc.members.begin(), gc.members.end(), major)) {
            out.insert(out.end(), gc.courses.begin(), gc.courses.end());
            break;
        }
    }
    const auto& own = majors[static_cast<std::size_t>(major)].own_courses[static_cast<std::size_t>(stage - 1)];
    out.insert(out.end(), own.begin(), own.end());
    std::sort(out.begin(), out.end());
    return out;
}

const CourseParams& PlantedWorld::course(const std::string& id) const {
    auto it = std::lower_bound(courses.begin(), courses.end(), id,
                               [](const CourseParams& c, const std::string& k) { return c.id < k; });
    if (it == courses.end() || it->id != id) throw Error("unknown planted course " + id);
    return *it;
}

PlantedWorld plan_world(std::uint64_t seed, const WorldConfig& config) {
    config.validate();
    PlantedWorld w;
    w.seed = seed;
    w.config = config;
    std::mt19937_64 rng(splitmix64(seed));

    const int code_width = std::max(3, static_cast<int>(std::to_string(config.majors).size()));
    for (int m = 0; m < config.majors; ++m) {
        PlantedMajor pm;
        pm.code = "M" + zero_pad(m + 1, code_width);
        if (m < static_cast<int>(kMajorNames.size())) pm.name = kMajorNames[static_cast<std::size_t>(m)];
        else if (m % 50 == 0) pm.name = w.majors.back().name;  // renamed program reusing a name
        else pm.name = "Program " + pm.code;
        pm.weight = 1.0 + config.size_skew * uniform(rng, -1.0, 1.0);
        pm.dropout_prob = std::clamp(config.withdraw_prob * uniform(rng, 0.5, 1.5), 0.0, 0.95);
        std::vector<double> shape(static_cast<std::size_t>(config.max_dropout_stage));
        for (std::size_t t = 0; t < shape.size(); ++t) shape[t] = std::pow(config.dropout_decay, static_cast<double>(t));
        const double total = std::accumulate(shape.begin(), shape.end(), 0.0);
        for (double& h : shape) h = pm.dropout_prob * h / total;
        pm.hazard = std::move(shape);
        pm.female_frac = uniform(rng, 0.25, 0.75);
        pm.own_courses.resize(static_cast<std::size_t>(config.stages));
        for (int t = 1; t <= config.stages; ++t)
            for (int k = 0; k < config.own_courses_per_stage; ++k)
                pm.own_courses[static_cast<std::size_t>(t - 1)].push_back(pm.code + "-" + std::to_string(t) +
                                                                           zero_pad(k + 1, 2));
        // First core at stage 1, the rest anywhere in the major's own curriculum.
        const auto& first_stage = pm.own_courses[0];
        const auto first = first_stage[std::uniform_int_distribution<std::size_t>(0, first_stage.size() - 1)(rng)];
        std::vector<std::string> pool;
        for (const auto& stage : pm.own_courses)
            for (const auto& c : stage)
                if (c != first) pool.push_back(c);
        std::shuffle(pool.begin(), pool.end(), rng);
        pm.core.push_back(first);
        pm.core.insert(pm.core.end(), pool.begin(), pool.begin() + (config.core_k - 1));
        std::sort(pm.core.begin(), pm.core.end());
        w.majors.push_back(std::move(pm));
    }

    w.partitions = config.schedule.empty() ? generate_schedule(config, rng) : config.schedule;
    for (auto& part : w.partitions) {
        for (auto& g : part) std::sort(g.begin(), g.end());
        std::sort(part.begin(), part.end());
    }

    for (int i = 0; i < config.gen_ed_courses; ++i) w.gen_ed.push_back("GEN" + zero_pad(101 + i, 3));
    for (int t = 1; t <= config.stages; ++t) {
        const auto& part = w.partitions[static_cast<std::size_t>(t - 1)];
        for (std::size_t gi = 0; gi < part.size(); ++gi) {
            if (part[gi].size() < 2) continue;
            GroupCourses gc;
            gc.stage = t;
            gc.members = part[gi];
            for (int k = 0; k < config.group_courses_per_stage; ++k)
                gc.courses.push_back("G" + std::to_string(t) + "-" + zero_pad(static_cast<long>(gi) + 1, 3) +
                                     static_cast<char>('A' + k % 26) + (k >= 26 ? std::to_string(k / 26) : ""));
            w.groups.push_back(std::move(gc));
        }
    }

    std::set<std::string> core_ids;
    for (const auto& m : w.majors) core_ids.insert(m.core.begin(), m.core.end());
    auto add_course = [&](const std::string& id) {
        CourseParams cp;
        cp.id = id;
        cp.core = core_ids.contains(id);
        cp.lambda = cp.core ? config.lambda_core : config.lambda_noncore;
        // Keep two aptitude SDs below the 4.0 ceiling so clamping does not
        // flatten a course's dependence on the factor.
        cp.mu = std::min(config.mu_mean + config.mu_spread * uniform(rng, -1.0, 1.0), 4.0 - 2.0 * cp.lambda);
        w.courses.push_back(std::move(cp));
    };
    for (const auto& id : w.gen_ed) add_course(id);
    for (const auto& gc : w.groups)
        for (const auto& id : gc.courses) add_course(id);
    for (const auto& m : w.majors)
        for (const auto& stage : m.own_courses)
            for (const auto& id : stage) add_course(id);
    std::sort(w.courses.begin(), w.courses.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return w;
}

namespace {

std::string stage_term(int cohort_year, int stage) {
    // stage 1 = Fall of the cohort year, stage 2 = the following Spring, ...
    const TermId term = stage % 2 == 1 ? TermId{cohort_year + (stage - 1) / 2, Season::Fall}
                                       : TermId{cohort_year + stage / 2, Season::Spring};
    return format_term(term);
}

struct StudentOutput {
    std::string grades;
    std::string graduation;
    std::string gender;
    std::size_t grade_rows = 0;
    bool graduated = false;
    WithdrawnTruth truth;
};

StudentOutput simulate_student(const PlantedWorld& w, const std::vector<std::vector<std::string>>& stage_cache,
                               const std::vector<double>& cumulative_weight, std::size_t index) {
    const auto& cfg = w.config;
    std::mt19937_64 rng(splitmix64(w.seed ^ splitmix64(index + 1)));
    std::normal_distribution<double> normal(0.0, 1.0);

    StudentOutput out;
    const std::string id = "S" + zero_pad(static_cast<long>(index) + 1, 7);

    const double pick = uniform(rng, 0.0, cumulative_weight.back());
    const int major = static_cast<int>(std::upper_bound(cumulative_weight.begin(), cumulative_weight.end(), pick) -
                                       cumulative_weight.begin());
    const auto& pm = w.majors[static_cast<std::size_t>(std::min(major, cfg.majors - 1))];
    const int major_ix = std::min(major, cfg.majors - 1);

    int dropout_stage = 0;
    {
        double u = uniform(rng, 0.0, 1.0);
        for (std::size_t t = 0; t < pm.hazard.size(); ++t) {
            if (u < pm.hazard[t]) {
                dropout_stage = static_cast<int>(t) + 1;
                break;
            }
            u -= pm.hazard[t];
        }
    }
    const int cohort = cfg.first_year + static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.cohort_years));
    const double aptitude = normal(rng);

    const double g = uniform(rng, 0.0, 1.0);
    const char* gender = g < cfg.gender_unknown ? "U" : (uniform(rng, 0.0, 1.0) < pm.female_frac ? "F" : "M");
    out.gender = id + "," + gender + "\n";

    const int last_stage = dropout_stage > 0 ? dropout_stage : cfg.stages;
    int taken = 0;
    for (int t = 1; t <= last_stage; ++t) {
        const auto& all = stage_cache[static_cast<std::size_t>(major_ix) * static_cast<std::size_t>(cfg.stages) +
                                      static_cast<std::size_t>(t - 1)];
        std::vector<std::size_t> pick_ix(all.size());
        std::iota(pick_ix.begin(), pick_ix.end(), 0);
        if (t == dropout_stage) {
            const double frac = uniform(rng, cfg.partial_load_min, 1.0);
            const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(frac * all.size())));
            std::shuffle(pick_ix.begin(), pick_ix.end(), rng);
            pick_ix.resize(std::min(keep, all.size()));
            std::sort(pick_ix.begin(), pick_ix.end());
        }
        const std::string term = stage_term(cohort, t);
        for (std::size_t ci : pick_ix) {
            const auto& course = w.course(all[ci]);
            const double w_draw = uniform(rng, 0.0, 1.0);
            const double eps = normal(rng);
            std::string_view token;
            if (w_draw < cfg.w_rate) {
                token = "W";
            } else {
                const double v = course.mu + course.lambda * aptitude + cfg.noise * eps;
                token = grade_name(nearest_letter(std::clamp(v, 0.0, 4.0)));
            }
            out.grades += id;
            out.grades += ',';
            out.grades += term;
            out.grades += ',';
            out.grades += course.id;
            out.grades += ',';
            out.grades += token;
            out.grades += '\n';
            ++out.grade_rows;
            ++taken;
        }
    }
    if (dropout_stage == 0) {
        out.graduated = true;
        out.graduation = id + "," + stage_term(cohort, cfg.stages) + "," + pm.code + "\n";
    } else {
        out.truth = {id, pm.code, dropout_stage, taken};
    }
    return out;
}

json manifest_json(const PlantedWorld& w, const WorldManifest& m, const std::vector<std::size_t>& major_graduates) {
    json j;
    j["schema_version"] = kManifestSchemaVersion;
    j["generator"] = "ecamp-synthgen";
    j["seed"] = w.seed;
    j["config"] = w.config;
    j["counts"] = {{"majors", w.majors.size()},
                   {"students", w.config.students},
                   {"graduates", m.graduates},
                   {"withdrawn", m.withdrawn.size()},
                   {"grade_rows", m.grade_rows}};
    j["gen_ed"] = w.gen_ed;
    json parts = json::array();
    for (const auto& part : w.partitions) {
        json stage = json::array();
        for (const auto& g : part) {
            json codes = json::array();
            for (int mi : g) codes.push_back(w.majors[static_cast<std::size_t>(mi)].code);
            stage.push_back(codes);
        }
        parts.push_back(stage);
    }
    j["partitions"] = parts;
    json majors = json::array();
    for (std::size_t mi = 0; mi < w.majors.size(); ++mi) {
        const auto& pm = w.majors[mi];
        json curriculum = json::array();
        for (int t = 1; t <= w.config.stages; ++t) curriculum.push_back(w.stage_courses(static_cast<int>(mi), t));
        majors.push_back({{"code", pm.code},
                          {"name", pm.name},
                          {"graduates", major_graduates[mi]},
                          {"dropout_prob", pm.dropout_prob},
                          {"hazard", pm.hazard},
                          {"core", pm.core},
                          {"curriculum", curriculum}});
    }
    j["majors"] = majors;
    json groups = json::array();
    for (const auto& gc : w.groups) {
        json codes = json::array();
        for (int mi : gc.members) codes.push_back(w.majors[static_cast<std::size_t>(mi)].code);
        groups.push_back({{"stage", gc.stage}, {"members", codes}, {"courses", gc.courses}});
    }
    j["group_courses"] = groups;
    json withdrawn = json::array();
    for (const auto& t : m.withdrawn)
        withdrawn.push_back({{"student", t.student},
                             {"intended_major", t.intended_major},
                             {"dropout_stage", t.dropout_stage},
                             {"courses_taken", t.courses_taken}});
    j["withdrawn"] = withdrawn;
    return j;
}

} // namespace

WorldManifest generate(std::uint64_t seed, const WorldConfig& config, const std::string& out_dir) {
    const PlantedWorld w = plan_world(seed, config);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    std::vector<std::vector<std::string>> stage_cache;
    for (int m = 0; m < config.majors; ++m)
        for (int t = 1; t <= config.stages; ++t) stage_cache.push_back(w.stage_courses(m, t));
    std::vector<double> cumulative;
    double acc = 0.0;
    for (const auto& pm : w.majors) cumulative.push_back(acc += pm.weight);

    std::ofstream grades(dir / "grades.csv", std::ios::binary);
    std::ofstream grads(dir / "graduations.csv", std::ios::binary);
    std::ofstream students(dir / "students.csv", std::ios::binary);
    if (!grades || !grads || !students) throw Error("cannot write synthetic data into " + out_dir);
    grades << "student_id,term,course_id,grade\n";
    grads << "student_id,term,major_code\n";
    students << "student_id,gender\n";

    WorldManifest manifest;
    std::vector<std::size_t> major_graduates(w.majors.size(), 0);
    std::unordered_map<std::string, std::size_t> major_index;
    for (std::size_t i = 0; i < w.majors.size(); ++i) major_index[w.majors[i].code] = i;

    // Students are simulated in fixed-size chunks; output order is by student
    // index regardless of how chunks are scheduled.
    constexpr std::size_t kChunk = 4096;
    const auto n = static_cast<std::size_t>(config.students);
    for (std::size_t base = 0; base < n; base += kChunk * 8) {
        const std::size_t chunks = std::min<std::size_t>(8, (n - base + kChunk - 1) / kChunk);
        std::vector<std::vector<StudentOutput>> results(chunks);
        parallel_for(chunks, [&](std::size_t c) {
            const std::size_t lo = base + c * kChunk;
            const std::size_t hi = std::min(n, lo + kChunk);
            for (std::size_t i = lo; i < hi; ++i) results[c].push_back(simulate_student(w, stage_cache, cumulative, i));
        });
        for (auto& chunk : results) {
            for (auto& s : chunk) {
                grades << s.grades;
                students << s.gender;
                manifest.grade_rows += s.grade_rows;
                if (s.graduated) {
                    grads << s.graduation;
                    ++manifest.graduates;
                    const auto code = s.graduation.substr(s.graduation.rfind(',') + 1);
                    ++major_graduates[major_index.at(code.substr(0, code.size() - 1))];
                } else {
                    manifest.withdrawn.push_back(std::move(s.truth));
                }
            }
        }
    }

    std::ofstream majors(dir / "majors.csv", std::ios::binary);
    majors << "major_code,major_name\n";
    for (const auto& pm : w.majors) majors << pm.code << ',' << csv::escape(pm.name) << '\n';

    manifest.json = manifest_json(w, manifest, major_graduates);
    std::ofstream(dir / "manifest.json") << manifest.json.dump(1) << '\n';
    return manifest;
}

std::vector<std::vector<std::vector<std::string>>> planted_partitions(const json& manifest) {
    return manifest.at("partitions").get<std::vector<std::vector<std::vector<std::string>>>>();
}

} // namespace ecamp::synth
