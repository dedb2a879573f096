#include <filesystem>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "doctest.h"
#include "lbl/error.hpp"
#include "lbl/linelist.hpp"
#include "synthetic.hpp"

using namespace lbl;

TEST_SUITE("linelist") {

TEST_CASE("fixed-width record fields") {
  const std::string rec = synth::record(2, 1, 2349.143, 3.5e-18, 0.5, 0.0712, 0.095, 106.1297,
                                        0.74, -0.0021, 'R', 16);
  const auto r = parse_record(rec, 7);
  REQUIRE(r.ok());
  const SpectralLine& l = r.line();
  CHECK(l.molecule_id == 2);
  CHECK(l.isotopologue_id == 1);
  CHECK(l.position == doctest::Approx(2349.143).epsilon(1e-15));
  CHECK(l.intensity_ref == doctest::Approx(3.5e-18).epsilon(1e-15));
  CHECK(l.gamma_foreign_ref == doctest::Approx(0.0712));
  CHECK(l.gamma_self_ref == doctest::Approx(0.095));
  CHECK(l.lower_state_energy == doctest::Approx(106.1297));
  CHECK(l.temp_exponent == doctest::Approx(0.74));
  CHECK(l.branch == Branch::R);
  CHECK(r.warnings.empty());
  CHECK(serialize_record(l) == rec);
}

TEST_CASE("fatal records carry index and reason") {
  const std::string good = synth::records(1, 3).front();
  const auto short_rec = parse_record(good.substr(0, 100), 4);
  REQUIRE_FALSE(short_rec.ok());
  CHECK(short_rec.error().record_index == 4);
  CHECK(short_rec.error().severity == Severity::Fatal);
  CHECK(short_rec.error().message == "wrong record length 100 (expected 160)");
  CHECK(format_diagnostic(short_rec.error()) ==
        "record 4: fatal: wrong record length 100 (expected 160)");

  CHECK_FALSE(parse_record(synth::mutate(good, synth::Mutation::Sign, 0)).ok());
  CHECK_FALSE(parse_record(synth::mutate(good, synth::Mutation::Sign, 1)).ok());
  CHECK_FALSE(parse_record(synth::mutate(good, synth::Mutation::Sign, 2)).ok());
  for (unsigned v = 0; v < 6; ++v) {
    CHECK_FALSE(parse_record(synth::mutate(good, synth::Mutation::NonNumeric, v)).ok());
  }
}

TEST_CASE("bad Einstein A is only a warning") {
  std::string rec = synth::records(1, 5).front();
  rec[27] = '?';
  const auto r = parse_record(rec);
  REQUIRE(r.ok());
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].severity == Severity::Warning);
}

TEST_CASE("field-formatted serialization re-parses") {
  for (const auto& rec : synth::records(50, 11)) {
    SpectralLine l = parse_record(rec).line();
    l.record.clear();
    const std::string out = serialize_record(l);
    REQUIRE(out.size() == 160);
    const auto back = parse_record(out);
    REQUIRE(back.ok());
    CHECK(back.line().position == l.position);
    CHECK(back.line().intensity_ref == l.intensity_ref);
    CHECK(back.line().gamma_foreign_ref == l.gamma_foreign_ref);
    CHECK(back.line().gamma_self_ref == l.gamma_self_ref);
    CHECK(back.line().lower_state_energy == l.lower_state_energy);
    CHECK(back.line().branch == l.branch);
  }
}

TEST_CASE("stream parsing, window and diagnostics") {
  const auto recs = synth::records(200, 21);
  std::stringstream in;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    in << (i == 10 ? recs[i].substr(0, 150) : recs[i]) << '\n';
  }
  in << '\n';
  const LineTable all = parse_linelist(in);
  CHECK(all.size() == 199);
  CHECK(all.fatal_count() == 1);
  CHECK(all.diagnostics()[0].record_index == 11);

  std::stringstream again;
  for (const auto& r : recs) again << r << '\n';
  const LineTable win = parse_linelist(again, WavenumberWindow{2000.0, 3000.0});
  CHECK(win.size() > 0);
  for (const auto& l : win.lines()) {
    CHECK(l.position >= 2000.0);
    CHECK(l.position <= 3000.0);
  }
  for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].position <= all[i].position);
  std::stringstream full;
  for (const auto& r : recs) full << r << '\n';
  const auto [lo, hi] = parse_linelist(full).range(2000.0, 3000.0);
  CHECK(hi - lo == win.size());
}

TEST_CASE("table order does not depend on input order") {
  auto recs = synth::records(100, 8);
  std::stringstream a, b;
  for (const auto& r : recs) a << r << '\n';
  for (auto it = recs.rbegin(); it != recs.rend(); ++it) b << *it << '\n';
  const LineTable ta = parse_linelist(a);
  const LineTable tb = parse_linelist(b);
  REQUIRE(ta.size() == tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) CHECK(ta[i] == tb[i]);
}

TEST_CASE("csv rows") {
  const auto r = parse_csv_line("2349.1, 1e-19, 0.07, 0.09, 10, 0.75, R");
  REQUIRE(r.ok());
  CHECK(r.line().position == 2349.1);
  CHECK(r.line().branch == Branch::R);
  const auto back = parse_csv_line(serialize_csv_line(r.line()));
  REQUIRE(back.ok());
  CHECK(back.line().position == r.line().position);
  CHECK(back.line().intensity_ref == r.line().intensity_ref);

  const auto few = parse_csv_line("1,2,3");
  REQUIRE_FALSE(few.ok());
  CHECK(few.error().message == "too few fields (3, expected at least 6)");
  CHECK_FALSE(parse_csv_line("\xE2\x88\x92" "5,1e-19,0.07,0.09,10,0.75").ok());
  CHECK(parse_csv_line("5,1e-19,0.07,0.09,10,0.75,X").warnings.size() == 1);

  std::stringstream in("# comment\n2300,1e-20,0.07,0.09,0,0.75\n\n2310,1e-20,0.07,0.09,0,0.75\n");
  const LineTable t = parse_linelist(in, std::nullopt, LineFormat::Csv);
  CHECK(t.size() == 2);
  CHECK(t.fatal_count() == 0);
}

TEST_CASE("concat merges and keeps order") {
  std::vector<SpectralLine> a(2), b(1);
  a[0].position = 1.0;
  a[1].position = 3.0;
  b[0].position = 2.0;
  const LineTable t = LineTable::concat(LineTable(a, "a"), LineTable(b, "b"));
  REQUIRE(t.size() == 3);
  CHECK(t[1].position == 2.0);
}

TEST_CASE("gzip and csv files") {
  const auto dir = std::filesystem::temp_directory_path() / "lbl_linelist_gz";
  std::filesystem::create_directories(dir);
  const auto recs = synth::records(30, 9);
  std::string text;
  for (const auto& r : recs) text += r + "\n";
  const std::string gz = (dir / "lines.par.gz").string();
  gzFile f = gzopen(gz.c_str(), "wb");
  REQUIRE(f != nullptr);
  gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  gzclose(f);
  const LineTable t = load_linelist(gz);
  CHECK(t.size() == 30);
  CHECK(t.fatal_count() == 0);
  std::stringstream plain(text);
  const LineTable p = parse_linelist(plain);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(t[i].record == p[i].record);

  std::ofstream(dir / "lines.csv") << "2300,1e-20,0.07,0.09,0,0.75\n2301,1e-20,0.07,0.09,0,0.75\n";
  CHECK(load_linelist((dir / "lines.csv").string()).size() == 2);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_linelist("/nonexistent/file.par"), IoError);
}

}
