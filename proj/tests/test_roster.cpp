#include "sandnet/error.hpp"
#include "sandnet/roster.hpp"

#include <gtest/gtest.h>

#include <set>
#include <string>

using namespace sandnet;

namespace {

const std::string kHeader = std::string(kRosterHeader) + "\n";

StudentRecord student(std::string uid, std::string semester, std::string major, int year, double grade = 85) {
    StudentRecord r;
    r.uid = uid;
    r.group = uid.substr(0, 1);
    r.semester = std::move(semester);
    r.major = std::move(major);
    r.year = year;
    r.grade = grade;
    r.gender = Gender::female;
    return r;
}

}  // namespace

TEST(ParseRoster, SingleRow) {
    Roster r = parse_roster(kHeader + "A1,F2012,A,92,F,CS,3,88\n");
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].grade, 92);
    EXPECT_EQ(r[0].gender, Gender::female);
    EXPECT_EQ(r[0].year, 3);
    EXPECT_EQ(r[0].intergrade, 88);
    EXPECT_EQ(r.index_of("A1"), 0u);
}

TEST(ParseRoster, DuplicateUidNamesRowThree) {
    try {
        parse_roster(kHeader + "A1,F2012,A,92,F,CS,3,88\nA1,F2012,A,70,M,CS,3,80\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("A1"), std::string::npos);
    }
}

TEST(ParseRoster, CommentLinesCountTowardLineNumbers) {
    try {
        parse_roster("# generated\n" + kHeader + "A1,F2012,A,192,F,CS,3,88\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(ParseRoster, EmptyIntergradeIsAbsent) {
    Roster r = parse_roster(kHeader + "A1,F2012,A,92,M,CS,3,\n");
    EXPECT_FALSE(r[0].intergrade.has_value());
    EXPECT_EQ(r[0].gender, Gender::male);
}

TEST(ParseRoster, RejectsBadRows) {
    EXPECT_THROW(parse_roster("uid,grade\n"), ParseError);
    EXPECT_THROW(parse_roster(kHeader + "A1,F2012,A,92,F,CS,3\n"), ParseError);
    EXPECT_THROW(parse_roster(kHeader + "A1,F2012,B,92,F,CS,3,88\n"), ParseError);
    EXPECT_THROW(parse_roster(kHeader + "A1,F2012,A,92,F,CS,9,88\n"), ParseError);
    EXPECT_THROW(parse_roster(kHeader + "A1,F2012,A,abc,F,CS,3,88\n"), ParseError);
    EXPECT_THROW(parse_roster(kHeader + "A1,F2012,A,92,F,CS,3,88\nA2,S2013,A,90,F,CS,3,88\n"), ParseError);
}

TEST(ParseRoster, EmitRoundTrip) {
    Roster r = generate_synthetic_roster({}, 17);
    EXPECT_EQ(parse_roster(emit_roster(r)), r);
}

TEST(SyntheticRoster, SingleGroupOfFour) {
    SyntheticRosterParams params;
    params.semesters = 1;
    params.groups = 1;
    params.students = 4;
    Roster r = generate_synthetic_roster(params, 7);
    ASSERT_EQ(r.size(), 4u);
    for (const auto& s : r.records()) {
        EXPECT_EQ(s.semester, r[0].semester);
        EXPECT_EQ(s.group, r[0].group);
    }
}

TEST(SyntheticRoster, Deterministic) {
    EXPECT_EQ(generate_synthetic_roster({}, 3), generate_synthetic_roster({}, 3));
    EXPECT_FALSE(generate_synthetic_roster({}, 3) == generate_synthetic_roster({}, 4));
}

TEST(SyntheticRoster, FiftyThreeStudentsInThirteenGroups) {
    Roster r = generate_synthetic_roster({}, 1);
    EXPECT_EQ(r.size(), 53u);
    EXPECT_EQ(r.groups().size(), 13u);
    std::set<std::string> semesters;
    std::set<LetterGrade> letters;
    for (const auto& s : r.records()) {
        semesters.insert(s.semester);
        letters.insert(letter_grade(s.grade));
    }
    EXPECT_EQ(semesters.size(), 3u);
    EXPECT_TRUE(letters.count(LetterGrade::A) && letters.count(LetterGrade::B) && letters.count(LetterGrade::C));
}

TEST(SyntheticRoster, RejectsImpossibleSpecs) {
    SyntheticRosterParams params;
    params.groups = 0;
    EXPECT_THROW(generate_synthetic_roster(params, 1), ValidationError);
    params = {};
    params.students = 5;
    params.groups = 13;
    EXPECT_THROW(generate_synthetic_roster(params, 1), ValidationError);
}

TEST(BuildFan, GroupIsClique) {
    Roster r({student("A1", "F2012", "CS", 2), student("A2", "F2012", "ENG", 3), student("A3", "F2012", "MGT", 4),
              student("A4", "F2012", "PW", 2)});
    Graph g = build_fan(r);
    EXPECT_EQ(g.size(), 4u);
    EXPECT_EQ(g.edge_count(), 6u);
    EXPECT_EQ(g.labels()[2], "A3");
}

TEST(BuildFan, SameMajorAndYearAcrossGroups) {
    Roster r({student("A1", "F2012", "CS", 3), student("B1", "F2012", "CS", 3)});
    EXPECT_EQ(build_fan(r).edge_count(), 1u);
}

TEST(BuildFan, DifferentSemestersNeverLink) {
    Roster r({student("A1", "F2012", "CS", 3), student("B1", "S2013", "CS", 3)});
    EXPECT_EQ(build_fan(r).edge_count(), 0u);
}

TEST(BuildFan, MajorMatchNeedsYearMatch) {
    Roster r({student("A1", "F2012", "CS", 3), student("B1", "F2012", "CS", 2)});
    EXPECT_EQ(build_fan(r).edge_count(), 0u);
}

TEST(BuildFanProperty, EdgesFollowTheRule) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Roster r = generate_synthetic_roster({}, seed);
        Graph g = build_fan(r);
        for (NodeId i = 0; i < r.size(); ++i) {
            for (NodeId j = 0; j < r.size(); ++j) {
                const auto& a = r[i];
                const auto& b = r[j];
                bool expect = i != j && a.semester == b.semester &&
                              (a.group == b.group || (a.major == b.major && a.year == b.year));
                ASSERT_EQ(g.adjacent(i, j), expect);
            }
        }
    }
}

TEST(LetterGrade, Boundaries) {
    EXPECT_EQ(letter_grade(92), LetterGrade::A);
    EXPECT_EQ(letter_grade(90), LetterGrade::A);
    EXPECT_EQ(letter_grade(80), LetterGrade::B);
    EXPECT_EQ(letter_grade(79.99), LetterGrade::C);
    EXPECT_EQ(letter_grade(69.5), LetterGrade::D_or_below);
    EXPECT_EQ(letter_grade(85, {95, 85, 75}), LetterGrade::B);
    EXPECT_EQ(to_string(LetterGrade::D_or_below), "D_or_below");
}
