//! Prompt templates and their unsupervised optimization loop: refine one
//! section at a time, keep a refinement only when the generated programs get
//! more diverse without the parse/check success rate dropping below the
//! threshold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use modsat_core::dsl::{self, DslProgram};
use modsat_core::hooks::Slot;
use modsat_llm::{ChatRequest, LlmClient};

use crate::diversity::{diversity_score, HashedTokenEmbedder};
use crate::AutoError;

pub const KEY_CODE_INTRO: &str = "<key code> of SAT solver is:";

/// A role/goal/tips template; the key code is appended last at render time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptTemplate {
    pub role: String,
    pub goal: String,
    pub tips: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplatePart {
    Role,
    Goal,
    Tips,
}

impl TemplatePart {
    pub const ALL: [TemplatePart; 3] = [TemplatePart::Role, TemplatePart::Goal, TemplatePart::Tips];

    pub fn name(self) -> &'static str {
        match self {
            TemplatePart::Role => "role",
            TemplatePart::Goal => "goal",
            TemplatePart::Tips => "tips",
        }
    }
}

impl PromptTemplate {
    pub fn part(&self, part: TemplatePart) -> &str {
        match part {
            TemplatePart::Role => &self.role,
            TemplatePart::Goal => &self.goal,
            TemplatePart::Tips => &self.tips,
        }
    }

    pub fn with_part(&self, part: TemplatePart, text: String) -> PromptTemplate {
        let mut out = self.clone();
        match part {
            TemplatePart::Role => out.role = text,
            TemplatePart::Goal => out.goal = text,
            TemplatePart::Tips => out.tips = text,
        }
        out
    }

    /// Parses the sectioned text format:
    /// `[role]` … `[goal]` … `[tips]` …
    pub fn parse(text: &str) -> Result<PromptTemplate, AutoError> {
        let mut sections: [(TemplatePart, String); 3] = [
            (TemplatePart::Role, String::new()),
            (TemplatePart::Goal, String::new()),
            (TemplatePart::Tips, String::new()),
        ];
        let mut current: Option<usize> = None;
        for line in text.lines() {
            match line.trim() {
                "[role]" => current = Some(0),
                "[goal]" => current = Some(1),
                "[tips]" => current = Some(2),
                _ => {
                    if let Some(i) = current {
                        sections[i].1.push_str(line);
                        sections[i].1.push('\n');
                    } else if !line.trim().is_empty() {
                        return Err(AutoError::Template(format!(
                            "text before the first section header: `{line}`"
                        )));
                    }
                }
            }
        }
        let [role, goal, tips] = sections.map(|(_, s)| s.trim().to_string());
        if role.is_empty() && goal.is_empty() && tips.is_empty() {
            return Err(AutoError::Template("no sections found".into()));
        }
        let template = PromptTemplate { role, goal, tips };
        template.validate()?;
        Ok(template)
    }

    pub fn render_file(&self) -> String {
        format!(
            "[role]\n{}\n\n[goal]\n{}\n\n[tips]\n{}\n",
            self.role, self.goal, self.tips
        )
    }

    /// A usable template names the target function and states the marker
    /// contract somewhere in its sections.
    pub fn validate(&self) -> Result<(), AutoError> {
        let joined = format!("{}\n{}\n{}", self.role, self.goal, self.tips);
        if !joined.contains("{{func_name}}") {
            return Err(AutoError::Template(
                "template never mentions {{func_name}}".into(),
            ));
        }
        if !joined.contains("// start") {
            return Err(AutoError::Template(
                "template never states the `// start` marker contract".into(),
            ));
        }
        Ok(())
    }
}

/// Renders the full generation prompt: role, goal and tips with
/// `{{func_name}}` substituted, then the key code last.
pub fn render(template: &PromptTemplate, slot: Slot, key_code: &str) -> Result<String, AutoError> {
    template.validate()?;
    let substitute = |text: &str| text.replace("{{func_name}}", slot.name());
    let body = format!(
        "{}\n\n{}\n\n{}",
        substitute(&template.role),
        substitute(&template.goal),
        substitute(&template.tips)
    );
    if let Some(pos) = body.find("{{") {
        let tail: String = body[pos..].chars().take(24).collect();
        return Err(AutoError::Template(format!(
            "unresolved placeholder at `{tail}…`"
        )));
    }
    Ok(format!("{body}\n\n{KEY_CODE_INTRO}\n{key_code}"))
}

#[derive(Debug, Clone, Serialize)]
pub struct PromptOptStep {
    pub iteration: usize,
    pub part: String,
    pub diversity: f64,
    pub success_rate: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PromptOptOutcome {
    pub template: PromptTemplate,
    pub history: Vec<PromptOptStep>,
}

#[derive(Debug, Clone)]
pub struct PromptOptOptions {
    pub iterations: usize,
    pub generations: usize,
    pub success_threshold: f64,
    pub seed: u64,
    pub generation_temperature: f64,
}

impl Default for PromptOptOptions {
    fn default() -> PromptOptOptions {
        PromptOptOptions {
            iterations: 10,
            generations: 20,
            success_threshold: 0.5,
            seed: 0,
            generation_temperature: 0.8,
        }
    }
}

/// Diversity of a candidate set: synonyms are collapsed to one canonical
/// form before embedding, so comment- or naming-level variation cannot
/// inflate the score.
pub fn canonical_diversity(programs: &[DslProgram], seed: u64) -> Result<f64, AutoError> {
    let mut canonical: Vec<String> = programs.iter().map(|p| dsl::canonicalize(p).text).collect();
    canonical.sort();
    canonical.dedup();
    diversity_score(&canonical, &HashedTokenEmbedder, seed)
}

/// One optimization pass over the template for a target slot.
///
/// Each iteration refines one uniformly chosen section via the LLM, renders
/// the refined template, asks for `generations` candidate programs, and
/// accepts the refinement only if diversity strictly improved while the
/// parse/check success rate stayed above the threshold. LLM failures skip
/// the iteration but consume it.
pub fn optimize_prompt(
    t0: &PromptTemplate,
    slot: Slot,
    key_code: &str,
    llm: &dyn LlmClient,
    scorer: &dyn Fn(&[DslProgram]) -> Result<f64, AutoError>,
    opts: &PromptOptOptions,
) -> Result<PromptOptOutcome, AutoError> {
    t0.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut template = t0.clone();
    let mut best_diversity = f64::NEG_INFINITY;
    let mut history = Vec::with_capacity(opts.iterations);

    for iteration in 0..opts.iterations {
        let part = TemplatePart::ALL[rng.random_range(0..3)];
        let refine_req = ChatRequest::new(
            "You refine one section of a prompt template that asks a model to rewrite one \
             heuristic function of a SAT solver. Reply with the replacement text for that \
             section only. Keep every {{func_name}} placeholder and any stated formatting \
             contract intact.",
            format!(
                "Section to refine: {part}\n\nCurrent [{part}] text:\n{current}\n\n\
                 Rewrite it so that generated functions become more diverse while staying \
                 syntactically valid.",
                part = part.name(),
                current = template.part(part),
            ),
        )
        .with_temperature(opts.generation_temperature);
        let refined_text = match llm.complete(&refine_req) {
            Ok(text) => text.trim().to_string(),
            Err(_) => {
                history.push(PromptOptStep {
                    iteration,
                    part: part.name().into(),
                    diversity: 0.0,
                    success_rate: 0.0,
                    accepted: false,
                });
                continue;
            }
        };
        let candidate_template = template.with_part(part, refined_text);
        if candidate_template.validate().is_err() {
            history.push(PromptOptStep {
                iteration,
                part: part.name().into(),
                diversity: 0.0,
                success_rate: 0.0,
                accepted: false,
            });
            continue;
        }

        let prompt = render(&candidate_template, slot, key_code)?;
        let mut successes: Vec<DslProgram> = Vec::new();
        for _ in 0..opts.generations {
            let gen_req =
                ChatRequest::new("", prompt.clone()).with_temperature(opts.generation_temperature);
            let Ok(text) = llm.complete(&gen_req) else {
                continue;
            };
            let Some(source) = dsl::extract_marked(&text, slot) else {
                continue;
            };
            if let Ok(program) = dsl::compile(&source, slot) {
                successes.push(program);
            }
        }
        let success_rate = successes.len() as f64 / opts.generations as f64;
        let diversity = scorer(&successes)?;
        let accepted = diversity > best_diversity && success_rate > opts.success_threshold;
        if accepted {
            best_diversity = diversity;
            template = candidate_template;
        }
        history.push(PromptOptStep {
            iteration,
            part: part.name().into(),
            diversity,
            success_rate,
            accepted,
        });
    }
    Ok(PromptOptOutcome { template, history })
}

/// The default scorer: canonical-collapsed entropy.
pub fn default_scorer(seed: u64) -> impl Fn(&[DslProgram]) -> Result<f64, AutoError> {
    move |programs| canonical_diversity(programs, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keycode::baseline_key_code;
    use modsat_llm::MockClient;

    fn template() -> PromptTemplate {
        PromptTemplate {
            role: "You are a solver engineer rewriting {{func_name}}.".into(),
            goal: "Improve {{func_name}}.".into(),
            tips: "Wrap the code in '// start {{func_name}}' and '// end {{func_name}}'.".into(),
        }
    }

    #[test]
    fn render_substitutes_and_ends_with_key_code() {
        let out = render(&template(), Slot::RestartCondition, "KEY").unwrap();
        assert!(out.contains("rewriting restart_condition."));
        assert!(out.ends_with("KEY"));
        assert!(!out.contains("{{func_name}}"));
    }

    #[test]
    fn render_rejects_template_without_func_name() {
        let mut t = template();
        t.role = "static".into();
        t.goal = "static".into();
        t.tips = "has '// start' contract".into();
        assert!(matches!(
            render(&t, Slot::RestartCondition, "KEY"),
            Err(AutoError::Template(_))
        ));
    }

    #[test]
    fn render_rejects_unresolved_placeholder() {
        let mut t = template();
        t.goal = "Improve {{func_name}} with {{mystery}}.".into();
        assert!(matches!(
            render(&t, Slot::RestartCondition, "KEY"),
            Err(AutoError::Template(_))
        ));
    }

    #[test]
    fn template_file_round_trips() {
        let t = template();
        let parsed = PromptTemplate::parse(&t.render_file()).unwrap();
        assert_eq!(parsed, t);
    }

    fn wrapped(src: &str) -> String {
        format!("// start restart_condition\n{src}\n// end restart_condition")
    }

    /// Mock whose refinements yield generation pools of increasing
    /// distinctness, always fully parseable.
    fn improving_mock(generations: usize) -> MockClient {
        let pool = [
            "return conflicts > 0;",
            "return conflict_r > 100;",
            "return fast_lbd_sum > slow_lbd_sum;",
            "return lbd_queue_size == 50;",
            "return progress_estimate() < 0.5;",
            "return decisions > 1000;",
            "return rephases >= rephase_limit;",
            "return trail_size < num_vars;",
            "return fast_avg > slow_avg;",
            "return wasted_bytes > arena_bytes / 2;",
        ];
        let per_iter = generations + 1; // one refine + `generations` codes
        MockClient::new(move |index, _req| {
            let iteration = index / per_iter;
            let offset = index % per_iter;
            if offset == 0 {
                // Refined section text keeping both validation anchors.
                Ok(format!(
                    "Rewrite {{{{func_name}}}} between '// start' markers (refinement {iteration})."
                ))
            } else {
                // Later iterations draw from a wider slice of the pool.
                let breadth = (iteration + 1).min(pool.len());
                Ok(wrapped(pool[(offset - 1) % breadth]))
            }
        })
    }

    #[test]
    fn accepted_diversity_strictly_increases() {
        let key = baseline_key_code(Slot::RestartCondition);
        let opts = PromptOptOptions {
            iterations: 6,
            generations: 8,
            ..Default::default()
        };
        let mock = improving_mock(opts.generations);
        let scorer = default_scorer(3);
        let out = optimize_prompt(
            &template(),
            Slot::RestartCondition,
            &key,
            &mock,
            &scorer,
            &opts,
        )
        .unwrap();
        let accepted: Vec<f64> = out
            .history
            .iter()
            .filter(|s| s.accepted)
            .map(|s| s.diversity)
            .collect();
        assert!(!accepted.is_empty(), "some refinement must be accepted");
        for pair in accepted.windows(2) {
            assert!(
                pair[1] > pair[0],
                "accepted diversity must strictly increase"
            );
        }
        // Every refinement parsed, so the final template is the last accepted
        // refinement, not the original.
        assert_ne!(out.template, template());
    }

    #[test]
    fn below_threshold_success_rate_blocks_acceptance() {
        // Refinements fine, but all generated code is unparseable garbage.
        let mock = MockClient::new(|index, _| {
            if index % 9 == 0 {
                Ok("refined".into())
            } else {
                Ok("not even close to code".into())
            }
        });
        let key = baseline_key_code(Slot::RestartCondition);
        let opts = PromptOptOptions {
            iterations: 3,
            generations: 8,
            ..Default::default()
        };
        let scorer = default_scorer(3);
        let out = optimize_prompt(
            &template(),
            Slot::RestartCondition,
            &key,
            &mock,
            &scorer,
            &opts,
        )
        .unwrap();
        assert!(out.history.iter().all(|s| !s.accepted));
        assert_eq!(out.template, template());
    }

    #[test]
    fn zero_iterations_returns_input_template() {
        let mock = MockClient::fixed("never called");
        let key = baseline_key_code(Slot::RestartCondition);
        let opts = PromptOptOptions {
            iterations: 0,
            ..Default::default()
        };
        let scorer = default_scorer(0);
        let out = optimize_prompt(
            &template(),
            Slot::RestartCondition,
            &key,
            &mock,
            &scorer,
            &opts,
        )
        .unwrap();
        assert_eq!(out.template, template());
        assert!(out.history.is_empty());
        assert_eq!(mock.calls(), 0);
    }

    #[test]
    fn synonymous_duplicates_collapse_before_entropy() {
        let a = dsl::compile("return conflicts > 0;", Slot::RestartCondition).unwrap();
        let b = dsl::compile(
            "// same thing\nreturn conflicts > 0;",
            Slot::RestartCondition,
        )
        .unwrap();
        let c = dsl::compile("return decisions > 5;", Slot::RestartCondition).unwrap();
        let with_dup = canonical_diversity(&[a.clone(), b, c.clone()], 9).unwrap();
        let without = canonical_diversity(&[a, c], 9).unwrap();
        assert_eq!(with_dup, without);
    }
}
