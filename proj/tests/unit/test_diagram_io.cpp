#include <filesystem>
#include <regex>
#include <sstream>
#include <string>

#include "cluster_bifurc/diagram.hpp"
#include "cluster_bifurc/errors.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace cluster_bifurc;

namespace {

const Diagram& sample() {
  static const Diagram d =
      build_diagram(ProblemKind::triangle, PotentialSpec(LennardJones{}), Window{0.3, 0.9}, ContinuationSettings{});
  return d;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Every opening tag is closed or self-closing, in nesting order.
bool balanced_xml(const std::string& svg) {
  std::vector<std::string> stack;
  const std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)[^>]*?(/?)>)");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tag); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m[1].length() > 0) {
      if (stack.empty() || stack.back() != m[2].str()) return false;
      stack.pop_back();
    } else if (m[3].length() == 0) {
      stack.push_back(m[2].str());
    }
  }
  return stack.empty();
}

}  // namespace

TEST_SUITE("diagram_io") {
  TEST_CASE("JSON round trip") {
    const Diagram& d = sample();
    const std::string text = export_json(d);
    const Diagram back = import_json(text);
    CHECK(back == d);
    CHECK(export_json(back) == text);
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc.contains("branches"));
    CHECK(doc.contains("events"));
  }

  TEST_CASE("malformed JSON names the key") {
    CHECK_THROWS_AS(import_json("not json"), ConfigError);
    auto doc = nlohmann::json::parse(export_json(sample()));
    doc["branches"][0]["points"][0].erase("parameter");
    try {
      import_json(doc.dump());
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.key().find("parameter") != std::string::npos);
    }
  }

  TEST_CASE("CSV has one row per point") {
    const Diagram& d = sample();
    const std::string csv = export_csv(d);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "branch_id,s,parameter,lambda,a,b,c,stable,shape");
    std::size_t points = 0;
    for (const auto& b : d.branches) points += b.points.size();
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      ++rows;
      CHECK(std::count(line.begin(), line.end(), ',') == 8);
    }
    CHECK(rows == points);
  }

  TEST_CASE("SVG is well formed and colored by stability") {
    const Diagram& d = sample();
    for (const auto& proj : {SvgProjection::component_vs_parameter("a"), SvgProjection::component_vs_parameter("lambda"),
                             SvgProjection::along_trivial_axis(), SvgProjection::oblique()}) {
      const std::string svg = render_svg(d, proj);
      CHECK(svg.find("<svg") != std::string::npos);
      CHECK(svg.find("</svg>") != std::string::npos);
      CHECK(balanced_xml(svg));
      CHECK(count(svg, "#008000") >= 1);
      CHECK(count(svg, "#c00000") >= 1);
      CHECK(count(svg, "<polyline") >= d.branches.size());
    }
  }

  TEST_CASE("SVG errors") {
    CHECK_THROWS_AS(render_svg(sample(), SvgProjection::component_vs_parameter("B")), UsageError);
    CHECK_THROWS_AS(render_svg(sample(), SvgProjection::component_vs_parameter("z")), UsageError);
    Diagram empty;
    CHECK_THROWS_AS(render_svg(empty, SvgProjection::component_vs_parameter("a")), UsageError);
  }

  TEST_CASE("file helpers") {
    const auto dir = std::filesystem::temp_directory_path() / "cluster_bifurc_io_test";
    std::filesystem::create_directories(dir);
    write_text_file(dir / "x.txt", "hello");
    CHECK(read_text_file(dir / "x.txt") == "hello");
    CHECK_THROWS_AS(read_text_file(dir / "missing.txt"), Error);
    CHECK_THROWS_AS(write_text_file(dir / "no" / "such" / "dir" / "x.txt", "x"), Error);
    std::filesystem::remove_all(dir);
  }
}
