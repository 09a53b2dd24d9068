#include "svar/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "svar/errors.hpp"

namespace svar {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string comment_line(const std::string& comment) {
  return comment.empty() ? std::string{} : "# " + comment + "\n";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

double parse_double_field(const std::string& field, std::size_t row, const char* what) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw IoError("population file row " + std::to_string(row) + ": bad " + what + " value \"" +
                  field + "\"");
  return v;
}

std::uint64_t parse_count_field(const std::string& field, std::size_t row, const char* what) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw IoError("population file row " + std::to_string(row) + ": bad " + what + " value \"" +
                  field + "\"");
  return v;
}

}  // namespace

std::string population_csv(const FinitePopulation& pop, bool include_x,
                           const std::string& header_comment) {
  if (include_x && !pop.has_x())
    throw ConfigError("population has no stratification variable to write");
  std::string out = comment_line(header_comment);
  out += include_x ? "stratum,group,y,x\n" : "stratum,group,y\n";
  for (std::size_t h = 0; h < pop.strata_count(); ++h) {
    for (std::size_t j = 0; j < pop.strata[h].size(); ++j) {
      out += std::to_string(h);
      out += ',';
      out += std::to_string(pop.group_of[h]);
      out += ',';
      out += format_double(pop.strata[h][j]);
      if (include_x) {
        out += ',';
        out += format_double(pop.x_aux[h][j]);
      }
      out += '\n';
    }
  }
  return out;
}

FinitePopulation parse_population_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  bool header_seen = false;
  bool has_x = false;

  FinitePopulation pop;
  std::map<std::size_t, std::size_t> group_map;  // stratum -> group
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() == 4 && fields[3] == "x")
        has_x = true;
      else if (fields.size() != 3)
        throw IoError("population file row " + std::to_string(row) +
                      ": expected header stratum,group,y[,x]");
      if (fields[0] != "stratum" || fields[1] != "group" || fields[2] != "y")
        throw IoError("population file row " + std::to_string(row) +
                      ": expected header stratum,group,y[,x]");
      header_seen = true;
      continue;
    }
    if (fields.size() != (has_x ? 4u : 3u))
      throw IoError("population file row " + std::to_string(row) + ": wrong field count");
    const std::size_t stratum = parse_count_field(fields[0], row, "stratum");
    const std::size_t group = parse_count_field(fields[1], row, "group");
    const double y = parse_double_field(fields[2], row, "y");
    if (stratum >= pop.strata.size()) {
      pop.strata.resize(stratum + 1);
      if (has_x) pop.x_aux.resize(stratum + 1);
    }
    auto [it, inserted] = group_map.emplace(stratum, group);
    if (!inserted && it->second != group)
      throw IoError("population file row " + std::to_string(row) +
                    ": stratum assigned to two groups");
    pop.strata[stratum].push_back(y);
    if (has_x) pop.x_aux[stratum].push_back(parse_double_field(fields[3], row, "x"));
  }
  if (!header_seen) throw IoError("population file: missing header row");
  if (pop.strata.empty()) throw IoError("population file: no data rows");

  pop.group_of.resize(pop.strata.size());
  for (std::size_t h = 0; h < pop.strata.size(); ++h) {
    auto it = group_map.find(h);
    if (it == group_map.end() || pop.strata[h].empty())
      throw IoError("population file: stratum " + std::to_string(h) + " has no rows");
    pop.group_of[h] = it->second;
  }
  const double n_total = static_cast<double>(pop.total_units());
  pop.weights.resize(pop.strata.size());
  for (std::size_t h = 0; h < pop.strata.size(); ++h)
    pop.weights[h] = static_cast<double>(pop.strata[h].size()) / n_total;
  pop.validate();
  return pop;
}

std::string summary_csv(const FinitePopulation& pop, const std::string& header_comment) {
  std::string out = comment_line(header_comment);
  out += "stratum,group,n,mean,s2,mu3,mu4\n";
  for (std::size_t h = 0; h < pop.strata_count(); ++h) {
    const StratumSummary s = summarize_stratum(pop.strata[h]);
    out += std::to_string(h) + ',' + std::to_string(pop.group_of[h]) + ',' +
           std::to_string(s.count) + ',' + format_double(s.mean) + ',' + format_double(s.s2) +
           ',' + format_double(s.mu3) + ',' + format_double(s.mu4) + '\n';
  }
  return out;
}

namespace {

std::string optional_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

}  // namespace

std::string report_csv(const SimulationReport& report, const std::string& header_comment) {
  std::string out = comment_line(header_comment);
  out += "study,estimator,e,metric,value,mc_se\n";
  for (const MetricRow& r : report.rows) {
    out += r.study + ',' + r.estimator + ',' + optional_field(r.e) + ',' + r.metric + ',' +
           format_double(r.value) + ',' + optional_field(r.mc_se) + '\n';
  }
  return out;
}

std::string raw_dump_csv(const SimulationReport& report, const std::string& header_comment) {
  std::string out = comment_line(header_comment);
  out += "study,replication,estimator,e,estimate,covered,ci_len\n";
  for (const RawRecord& r : report.raw) {
    out += r.study + ',' + std::to_string(r.replication) + ',' + method_name(r.method) + ',' +
           optional_field(r.e) + ',' + format_double(r.estimate) + ',';
    if (r.covered) out += *r.covered ? '1' : '0';
    out += ',' + optional_field(r.ci_len) + '\n';
  }
  return out;
}

std::string shrinkage_dump_csv(const SimulationReport& report,
                               const std::string& header_comment) {
  std::string out = comment_line(header_comment);
  out += "study,replication,g,s2,delta_eb,delta_ceb,fallback\n";
  for (const ShrinkageRecord& r : report.shrinkage_raw) {
    out += r.study + ',' + std::to_string(r.replication) + ',' + std::to_string(r.group) + ',' +
           format_double(r.s2) + ',' + format_double(r.delta_eb) + ',' +
           format_double(r.delta_ceb) + ',' + (r.fallback ? '1' : '0') + '\n';
  }
  return out;
}

std::string theory_csv(const TheoryReport& paper, const TheoryReport& exact,
                       const std::optional<OracleColumns>& oracle,
                       const std::string& header_comment) {
  std::string out = comment_line(header_comment);
  out += "convention,V1,V2,deff,Ev_collapsed,bias,var_v,mse,oracle_mean,oracle_Ev_collapsed,"
         "oracle_Var_collapsed,oracle_Ev_two_per_stratum\n";
  for (const TheoryReport* r : {&paper, &exact}) {
    out += r->convention == FpcConvention::Paper ? "paper" : "exact";
    out += ',' + format_double(r->v1) + ',' + format_double(r->v2) + ',' +
           format_double(r->deff) + ',' + format_double(r->ev_collapsed) + ',' +
           format_double(r->bias) + ',' + format_double(r->var_v) + ',' + format_double(r->mse);
    if (oracle) {
      out += ',' + format_double(oracle->mean_d1) + ',' + format_double(oracle->ev_collapsed) +
             ',' + format_double(oracle->var_collapsed) + ',' +
             format_double(oracle->ev_two_per_stratum);
    } else {
      out += ",,,,";
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace svar
