#include "sandnet/roster.hpp"

#include "sandnet/error.hpp"
#include "sandnet/io.hpp"
#include "sandnet/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace sandnet {

char gender_code(Gender g) noexcept {
    switch (g) {
        case Gender::male: return 'M';
        case Gender::female: return 'F';
        case Gender::other: return 'O';
    }
    return 'O';
}

namespace {

void check_record(const StudentRecord& r, std::size_t line) {
    if (r.uid.size() < 2) throw ParseError(line, "uid '" + r.uid + "' needs a group character and an in-group id");
    if (r.group.size() != 1) throw ParseError(line, "group id '" + r.group + "' must be a single character");
    if (r.uid.front() != r.group.front()) {
        throw ParseError(line, "uid '" + r.uid + "' does not start with its group '" + r.group + "'");
    }
    if (r.semester.empty()) throw ParseError(line, "empty semester for '" + r.uid + "'");
    if (!(r.grade >= 0.0 && r.grade <= 100.0)) {
        throw ParseError(line, "grade out of range [0,100] for '" + r.uid + "'");
    }
    if (r.year < 1 || r.year > 6) throw ParseError(line, "year out of range [1,6] for '" + r.uid + "'");
    if (r.intergrade && !(*r.intergrade >= 0.0 && *r.intergrade <= 100.0)) {
        throw ParseError(line, "intergrade out of range [0,100] for '" + r.uid + "'");
    }
}

}  // namespace

Roster::Roster(std::vector<StudentRecord> records, std::span<const std::size_t> source_lines)
    : records_(std::move(records)) {
    const bool have_lines = source_lines.size() == records_.size();
    auto where = [&](std::size_t i) {
        return have_lines ? "line " + std::to_string(source_lines[i]) : "record " + std::to_string(i);
    };
    std::unordered_map<std::string, std::pair<std::string, std::size_t>> group_semester;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        const std::size_t line = have_lines ? source_lines[i] : 0;
        check_record(r, line);
        auto [it, inserted] = index_.emplace(r.uid, static_cast<NodeId>(i));
        if (!inserted) {
            throw ParseError(line, "duplicate uid '" + r.uid + "' (first seen on " + where(it->second) + ")");
        }
        auto [git, ginserted] = group_semester.emplace(r.group, std::make_pair(r.semester, i));
        if (!ginserted && git->second.first != r.semester) {
            throw ParseError(line, "group '" + r.group + "' spans semesters " + git->second.first + " (" +
                                       where(git->second.second) + ") and " + r.semester);
        }
    }
}

std::optional<NodeId> Roster::index_of(std::string_view uid) const {
    auto it = index_.find(std::string(uid));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> Roster::groups() const {
    std::vector<std::string> out;
    for (const auto& r : records_) {
        if (std::find(out.begin(), out.end(), r.group) == out.end()) out.push_back(r.group);
    }
    return out;
}

namespace {

double parse_real(std::string_view token, std::size_t line, std::string_view field) {
    token = io::trim(token);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value)) {
        throw ParseError(line, "bad " + std::string(field) + " '" + std::string(token) + "'");
    }
    return value;
}

int parse_year(std::string_view token, std::size_t line) {
    token = io::trim(token);
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError(line, "bad year '" + std::string(token) + "'");
    }
    return value;
}

Gender parse_gender(std::string_view token) {
    token = io::trim(token);
    if (token == "M" || token == "m") return Gender::male;
    if (token == "F" || token == "f") return Gender::female;
    return Gender::other;
}

}  // namespace

Roster parse_roster(std::string_view text) {
    std::vector<StudentRecord> records;
    std::vector<std::size_t> record_lines;
    std::size_t line_no = 0;
    bool header_seen = false;
    for (std::string_view line : io::lines(text)) {
        ++line_no;
        const std::string_view trimmed = io::trim(line);
        if (!header_seen) {
            if (trimmed.empty() || trimmed.front() == '#') continue;
            if (trimmed != kRosterHeader) {
                throw ParseError(line_no, "expected header '" + std::string(kRosterHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        if (trimmed.empty()) continue;
        auto fields = io::split(line, ',');
        if (fields.size() != 8) {
            throw ParseError(line_no, "expected 8 fields, got " + std::to_string(fields.size()));
        }
        StudentRecord r;
        r.uid = std::string(io::trim(fields[0]));
        r.semester = std::string(io::trim(fields[1]));
        r.group = std::string(io::trim(fields[2]));
        r.grade = parse_real(fields[3], line_no, "grade");
        r.gender = parse_gender(fields[4]);
        r.major = std::string(io::trim(fields[5]));
        r.year = parse_year(fields[6], line_no);
        if (!io::trim(fields[7]).empty()) r.intergrade = parse_real(fields[7], line_no, "intergrade");
        records.push_back(std::move(r));
        record_lines.push_back(line_no);
    }
    if (!header_seen) throw ParseError(0, "missing roster header");
    return Roster(std::move(records), record_lines);
}

std::string emit_roster(const Roster& roster) {
    std::ostringstream out;
    out << kRosterHeader << '\n';
    for (const auto& r : roster.records()) {
        out << r.uid << ',' << r.semester << ',' << r.group << ',' << io::format_double(r.grade) << ','
            << gender_code(r.gender) << ',' << r.major << ',' << r.year << ','
            << (r.intergrade ? io::format_double(*r.intergrade) : std::string()) << '\n';
    }
    return out.str();
}

namespace {

constexpr std::string_view kGroupChars = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
constexpr std::string_view kMemberChars = "123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";

std::string semester_label(std::size_t i) {
    // S2012, F2012, S2013, F2013, ...
    return std::string(i % 2 == 0 ? "S" : "F") + std::to_string(2012 + i / 2);
}

}  // namespace

Roster generate_synthetic_roster(const SyntheticRosterParams& params, std::uint64_t seed) {
    if (params.semesters == 0 || params.groups == 0 || params.students == 0) {
        throw ValidationError("synthetic roster needs at least one semester, group and student");
    }
    if (params.majors.empty() || params.years.empty()) throw ValidationError("major and year pools must be non-empty");
    if (params.groups > kGroupChars.size()) {
        throw ValidationError("at most " + std::to_string(kGroupChars.size()) + " groups are supported");
    }
    if (params.semesters > params.groups) throw ValidationError("more semesters than groups");
    if (params.students < params.groups) throw ValidationError("every group needs at least one student");
    const std::size_t base = params.students / params.groups;
    const std::size_t extra = params.students % params.groups;
    if (base + (extra ? 1 : 0) > kMemberChars.size()) {
        throw ValidationError("at most " + std::to_string(kMemberChars.size()) + " students per group");
    }
    for (int y : params.years) {
        if (y < 1 || y > 6) throw ValidationError("year pool entries must lie in [1,6]");
    }

    SplitMix64 rng(seed);

    // Balanced letter bands: A, B, C repeated, then shuffled.
    std::vector<int> bands(params.students);
    for (std::size_t i = 0; i < bands.size(); ++i) bands[i] = static_cast<int>(i % 3);
    for (std::size_t i = bands.size(); i > 1; --i) std::swap(bands[i - 1], bands[rng.below(i)]);

    std::vector<StudentRecord> records;
    records.reserve(params.students);
    std::size_t student = 0;
    for (std::size_t g = 0; g < params.groups; ++g) {
        const std::size_t size = base + (g < extra ? 1 : 0);
        const std::string group(1, kGroupChars[g]);
        const std::string semester = semester_label(g % params.semesters);
        for (std::size_t m = 0; m < size; ++m, ++student) {
            StudentRecord r;
            r.uid = group + kMemberChars[m];
            r.semester = semester;
            r.group = group;
            r.grade = 90.0 - 10.0 * bands[student] + static_cast<double>(rng.below(10));
            r.gender = rng.below(2) == 0 ? Gender::male : Gender::female;
            r.major = params.majors[rng.below(params.majors.size())];
            r.year = params.years[rng.below(params.years.size())];
            r.intergrade = 60.0 + static_cast<double>(rng.below(41));
            records.push_back(std::move(r));
        }
    }
    return Roster(std::move(records));
}

Graph build_fan(const Roster& roster) {
    if (roster.empty()) throw ValidationError("cannot build a network from an empty roster");
    const auto& r = roster.records();
    Graph g(r.size());
    for (NodeId i = 0; i < r.size(); ++i) {
        for (NodeId j = i + 1; j < r.size(); ++j) {
            if (r[i].semester != r[j].semester) continue;
            const bool same_group = r[i].group == r[j].group;
            const bool same_cohort = r[i].major == r[j].major && r[i].year == r[j].year;
            if (same_group || same_cohort) g.add_edge(i, j);
        }
    }
    std::vector<std::string> labels;
    labels.reserve(r.size());
    for (const auto& rec : r) labels.push_back(rec.uid);
    g.set_labels(std::move(labels));
    return g;
}

std::string_view to_string(LetterGrade grade) noexcept {
    switch (grade) {
        case LetterGrade::A: return "A";
        case LetterGrade::B: return "B";
        case LetterGrade::C: return "C";
        case LetterGrade::D_or_below: return "D_or_below";
    }
    return "?";
}

LetterGrade letter_grade(double grade, const GradeBands& bands) {
    if (!(grade >= 0.0 && grade <= 100.0)) throw ValidationError("grade out of range [0,100]");
    if (grade >= bands.a) return LetterGrade::A;
    if (grade >= bands.b) return LetterGrade::B;
    if (grade >= bands.c) return LetterGrade::C;
    return LetterGrade::D_or_below;
}

}  // namespace sandnet
