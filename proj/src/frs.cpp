#include "sdsim/frs.hpp"

#include "sdsim/errors.hpp"
#include "sdsim/parser.hpp"

namespace sdsim {

namespace {

VariableDef def(int index, const char* name, ExprPtr e, const char* units) {
    VariableDef d;
    d.index = index;
    d.name = name;
    d.kind = classify(d.name, *e);
    d.expr = std::move(e);
    d.units = parse_units(units);
    return d;
}

VariableDef control(int index, const char* name, ExprPtr e, const char* doc, bool open_range) {
    VariableDef d = def(index, name, std::move(e), "Day");
    d.kind = VarKind::Control;
    d.doc = doc;
    if (open_range) d.range = ValueRange{0.0, std::nullopt};
    return d;
}

}  // namespace

ModelSpec build_frs_model() {
    ModelSpec m;
    auto& vs = m.variables;
    vs.reserve(45);

    vs.push_back(def(1, "Accuracy", num(1), "Dmnl"));
    vs.push_back(def(2, "ATOP", num(1), "bias"));
    vs.push_back(def(3, "Avg Interaction Life", num(6760), "Day"));
    vs.push_back(def(4, "Avg Interactions with Recommendations", divide(var("FRE"), var("HCI")),
                     "recommendations/interactions"));
    vs.push_back(def(5, "Avg Quality", divide(var("Performance"), var("FRE")),
                     "quality/recommendations"));
    vs.push_back(def(6, "Avg. new recommendations", num(26000), "recommendations"));
    vs.push_back(def(7, "Avg. New Users per. Items", num(1.74), "1/Day"));
    vs.push_back(def(8, "Coefficient of Bias Distribution & Skewness",
                     divide(var("Skewness"), var("Relative Bias")), "quality/bias"));
    vs.push_back(def(9, "Debiasing in Research & Model Training",
                     divide(var("Rebalancing & Regularization"),
                            mul(var("New Modeling"), var("Time to Debias"))),
                     "bias/(interactions*Day)"));
    vs.push_back(def(10, "Desired Interactions", num(26000), "interactions"));
    vs.push_back(def(11, "Distribution of Bias in Data & Design",
                     integ(sub(var("New Processing Rate"),
                               var("Debiasing in Research & Model Training")),
                           num(1)),
                     "bias/interactions"));
    vs.push_back(def(12, "Effect of Interaction on New Recommendations",
                     mul(var("HCI"), var("Median Conversion Rate")), "1/Day"));
    vs.push_back(def(13, "Effect of Rating on Interactions with Recommendations",
                     divide(var("Effects of User Bias on Rating"),
                            var("Avg Interactions with Recommendations")),
                     "interactions/(recommendations*bias)"));
    vs.push_back(def(14, "Effects of Debiasing on Skeweness",
                     add(var("ATOP"), var("Propensity Score")), "bias"));
    vs.push_back(def(15, "Effects of User Bias on Rating", divide(num(1), var("User Bias")),
                     "1/bias"));
    vs.push_back(control(16, "FINAL TIME", num(100), "The final time for the simulation.", false));
    vs.push_back(def(17, "FRE",
                     integ(sub(var("Increased Recommendations"), var("Removed Recommendations")),
                           num(5)),
                     "recommendations"));
    vs.push_back(def(18, "HCI",
                     integ(sub(var("Interaction Increased Rate"), var("Interaction Decrease Rate")),
                           num(10)),
                     "interactions"));
    vs.push_back(def(19, "Increased Quality",
                     mul(var("Quality of each new Recommendations"),
                         var("Increased Recommendations")),
                     "quality/Day"));
    vs.push_back(def(20, "Increased Recommendations",
                     mul(var("Effect of Interaction on New Recommendations"),
                         var("Avg. new recommendations")),
                     "recommendations/Day"));
    vs.push_back(def(21, "Inductive Bias", num(1), "bias"));
    vs.push_back(control(22, "INITIAL TIME", num(0), "The initial time for the simulation.",
                         false));
    vs.push_back(def(23, "Interaction Decrease Rate",
                     divide(var("HCI"), var("Avg Interaction Life")), "interactions/Day"));
    vs.push_back(def(24, "Interaction Increased Rate",
                     call(Func::Max,
                          {num(0),
                           add(divide(sub(var("Desired Interactions"), var("HCI")),
                                      var("Time to Adjust Interactions")),
                               var("Interaction Decrease Rate"))}),
                     "interactions/Day"));
    vs.push_back(def(25, "Label observation Randomness", num(1), "Dmnl"));
    vs.push_back(def(26, "Lifecycle", num(180), "Day"));
    vs.push_back(def(27, "Median Conversion Rate", num(2.4), "1/(Day*interactions)"));
    vs.push_back(def(28, "New Modeling", num(1), "interactions"));
    vs.push_back(def(29, "New Processing Rate",
                     mul(divide(mul(add(var("Inductive Bias"), var("Popularity Bias")),
                                    var("Avg. New Users per. Items")),
                                var("HCI")),
                         var("Label observation Randomness")),
                     "bias/(interactions*Day)"));
    vs.push_back(def(30, "Performance",
                     integ(sub(var("Increased Quality"), var("Removed Quality")), num(1)),
                     "quality"));
    vs.push_back(def(31, "Popularity Bias", num(1), "bias"));
    vs.push_back(def(32, "Propensity Score", num(1), "bias"));
    vs.push_back(def(33, "Quality of each new Recommendations",
                     call(Func::RandomNormal,
                          {num(1), num(5), mul(var("Accuracy"), var("Avg Quality")),
                           var("Skewed Patterns in Model"), var("Seed")}),
                     "quality/recommendations"));
    vs.push_back(def(34, "Rebalancing & Regularization", num(0), "bias"));
    vs.push_back(def(35, "Relative Bias", num(1), "bias"));
    vs.push_back(def(36, "Removed Quality",
                     mul(var("Avg Quality"), var("Removed Recommendations")), "quality/Day"));
    vs.push_back(def(37, "Removed Recommendations",
                     add(divide(var("FRE"), var("Lifecycle")),
                         mul(var("Avg Interactions with Recommendations"),
                             var("Interaction Decrease Rate"))),
                     "recommendations/Day"));
    vs.push_back(control(38, "SAVEPER", var("TIME STEP"),
                         "The frequency with which output is stored.", true));
    vs.push_back(def(39, "Seed", num(1), "Dmnl"));
    vs.push_back(def(40, "Skewed Patterns in Model",
                     mul(mul(var("Effects of Debiasing on Skeweness"),
                             var("Effect of Rating on Interactions with Recommendations")),
                         mul(var("Distribution of Bias in Data & Design"),
                             var("Coefficient of Bias Distribution & Skewness"))),
                     "quality/recommendations"));
    vs.push_back(def(41, "Skewness", num(1), "quality"));
    vs.push_back(control(42, "TIME STEP", num(0.0078125), "The time step for the simulation.",
                         true));
    vs.push_back(def(43, "Time to Adjust Interactions", num(6760), "Day"));
    vs.push_back(def(44, "Time to Debias", num(1), "Day"));
    vs.push_back(def(45, "User Bias", num(1), "bias"));

    m.control.initial_time = 0.0;
    m.control.final_time = 100.0;
    m.control.saveper_tracks_dt = true;
    m.control.set_dt(0.0078125);
    return m;
}

std::vector<std::pair<std::string, double>> frs_constants() {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& v : build_frs_model().variables) {
        if (v.kind != VarKind::Constant) continue;
        out.emplace_back(v.name, std::get<Expr::Number>(v.expr->node).value);
    }
    return out;
}

std::vector<std::pair<std::string, double>> frs_initial_stocks() {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& v : build_frs_model().variables) {
        if (v.kind != VarKind::Stock) continue;
        const auto& c = std::get<Expr::Call>(v.expr->node);
        out.emplace_back(v.name, std::get<Expr::Number>(c.args[1]->node).value);
    }
    return out;
}

Preset preset(const std::string& name) {
    if (name == "base") {
        return {name, {}, "every bias constant at its default of 1"};
    }
    if (name == "inductive-x2") {
        return {name, {{"Inductive Bias", 2}}, "inductive bias doubled"};
    }
    if (name == "user-x2") {
        return {name, {{"User Bias", 2}}, "user bias doubled"};
    }
    if (name == "all-bias-x5") {
        return {name,
                {{"Inductive Bias", 5}, {"Popularity Bias", 5}, {"User Bias", 5}},
                "inductive, popularity, and user bias at five times default"};
    }
    if (name == "intervention-research") {
        return {name,
                {{"Inductive Bias", 5},
                 {"Popularity Bias", 5},
                 {"User Bias", 5},
                 {"Rebalancing & Regularization", 5}},
                "all-bias-x5 plus rebalancing and regularization at 5"};
    }
    if (name == "intervention-full") {
        return {name,
                {{"Inductive Bias", 5},
                 {"Popularity Bias", 5},
                 {"User Bias", 5},
                 {"Rebalancing & Regularization", 5},
                 {"ATOP", 5},
                 {"Propensity Score", 5}},
                "intervention-research plus ATOP and propensity scores at 5"};
    }
    if (name == "dist-exponential") {
        return {name,
                {{"Skewness", 4.57}, {"Relative Bias", 0.07}},
                "exponential bias shape: skewness 4.57, relative bias 0.07"};
    }
    if (name == "dist-lognormal") {
        return {name,
                {{"Skewness", 2.81}, {"Relative Bias", 0.14}},
                "log-normal bias shape: skewness 2.81, relative bias 0.14"};
    }
    if (name == "dist-gamma2") {
        return {name,
                {{"Skewness", 2.81}, {"Relative Bias", 0.19}},
                "gamma (alpha 2) bias shape: skewness 2.81, relative bias 0.19"};
    }
    if (name == "dist-gamma4") {
        return {name,
                {{"Skewness", 2.04}, {"Relative Bias", 0.21}},
                "gamma (alpha 4) bias shape: skewness 2.04, relative bias 0.21"};
    }
    throw UnknownPreset(name);
}

std::vector<std::string> preset_names() {
    return {"base",
            "inductive-x2",
            "user-x2",
            "all-bias-x5",
            "intervention-research",
            "intervention-full",
            "dist-exponential",
            "dist-lognormal",
            "dist-gamma2",
            "dist-gamma4"};
}

}  // namespace sdsim
