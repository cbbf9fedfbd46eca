//! Writing-task prompts.

/// Prompt for the individual (non-interactive) writing task.
pub const INDIVIDUAL_WRITING_PROMPT: &str = "Please share a personal story below in 800 words. \
Do not explicitly mention your personality traits in the story.";

const INTERACTIVE_TEMPLATE: &str = "Please share a personal story below in 800 words. Do not \
explicitly mention your personality traits in the story. Last response to question is \
{other_model_response}";

/// Prompt for the second agent in an interaction: the individual prompt
/// plus the partner's story substituted for `{other_model_response}`.
pub fn interactive_writing_prompt(partner_story: &str) -> String {
    INTERACTIVE_TEMPLATE.replace("{other_model_response}", partner_story)
}
