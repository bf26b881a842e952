#include <heston/report_io.hpp>

#include <cstdio>
#include <ostream>

namespace heston::io {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_lq_csv(std::span<const mc::lq_report> reports, std::ostream& out) {
    out << "study,beta,epsilon,rule,j,q,estimate,sigma,ci_low,ci_high,se\n";
    for (const mc::lq_report& r : reports) {
        for (const mc::lq_cell& c : r.cells) {
            out << "lq-convergence," << g17(r.params.beta) << ',' << g17(c.epsilon) << ','
                << c.rule << ',' << c.j << ',' << c.q << ',' << g17(c.estimate) << ','
                << g17(c.sigma) << ',' << g17(c.ci_low) << ',' << g17(c.ci_high) << ','
                << g17(c.se) << '\n';
        }
    }
}

namespace {

void write_slope_rows(const std::string& study, double beta,
                      std::span<const mc::slope_entry> slopes, std::ostream& out) {
    for (const mc::slope_entry& s : slopes) {
        out << study << ',' << g17(beta) << ',' << s.rule << ',' << s.quantity << ','
            << g17(s.slope) << ',' << g17(s.intercept) << ',' << g17(s.max_residual) << ','
            << (s.restricted ? 1 : 0) << ',';
        for (std::size_t i = 0; i < s.eps_used.size(); ++i) {
            if (i) out << ' ';
            out << g17(s.eps_used[i]);
        }
        out << '\n';
    }
}

}  // namespace

void write_lq_slopes_csv(std::span<const mc::lq_report> reports, std::ostream& out) {
    out << "study,beta,rule,quantity,slope,intercept,max_residual,restricted,eps_used\n";
    for (const mc::lq_report& r : reports) {
        write_slope_rows("lq-convergence", r.params.beta, r.slopes, out);
    }
}

void write_estimator_csv(std::span<const mc::estimator_report> reports, std::ostream& out) {
    out << "study,beta,epsilon,quantity,lag,l2_error,n_used,n_degenerate\n";
    for (const mc::estimator_report& r : reports) {
        for (const mc::estimator_cell& c : r.cells) {
            out << "estimator-convergence," << g17(r.params.beta) << ',' << g17(c.epsilon)
                << ',' << c.quantity << ',' << g17(c.lag) << ',' << g17(c.l2_error) << ','
                << c.n_used << ',' << c.n_degenerate << '\n';
        }
    }
}

void write_estimator_slopes_csv(std::span<const mc::estimator_report> reports,
                                std::ostream& out) {
    out << "study,beta,rule,quantity,slope,intercept,max_residual,restricted,eps_used\n";
    for (const mc::estimator_report& r : reports) {
        write_slope_rows("estimator-convergence", r.params.beta, r.slopes, out);
    }
}

void write_replicates_csv(std::span<const mc::estimator_report> reports, std::ostream& out) {
    out << "beta,replicate,epsilon,theta_hat,kappa_hat,gamma_hat,m_hat,k0,ku,realized_u,"
           "degenerate\n";
    for (const mc::estimator_report& r : reports) {
        for (const mc::replicate_row& row : r.replicates) {
            out << g17(r.params.beta) << ',' << row.replicate << ',' << g17(row.epsilon)
                << ',' << g17(row.theta) << ','
                << g17(row.kappa) << ',' << g17(row.gamma) << ',' << g17(row.m_hat) << ','
                << g17(row.k0) << ',' << g17(row.ku) << ',' << g17(row.realized_u) << ','
                << (row.degenerate ? 1 : 0) << '\n';
        }
    }
}

void write_checks_csv(std::span<const check_result> checks, std::ostream& out) {
    out << "name,observed,tolerance,pass\n";
    for (const check_result& c : checks) {
        out << c.name << ',' << g17(c.observed) << ',' << g17(c.tolerance) << ','
            << (c.pass ? 1 : 0) << '\n';
    }
}

}  // namespace heston::io
