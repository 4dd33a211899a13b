//! Text rendering of a position: the formula as the run has left it.

use clarena_core::formula::{Atom, Formula, Kind};
use clarena_core::game::{GameTree, Pos};
use clarena_core::Player;

fn slot(p: Player) -> usize {
    match p {
        Player::Top => 0,
        Player::Bottom => 1,
    }
}

fn symbol(f: &Formula) -> &'static str {
    match f {
        Formula::Par(Kind::Conj, _) => " & ",
        Formula::Par(Kind::Disj, _) => " | ",
        Formula::Choice(Kind::Conj, _) => " * ",
        Formula::Choice(Kind::Disj, _) => " + ",
        Formula::Seq(Kind::Conj, ..) => " &> ",
        Formula::Seq(Kind::Disj, ..) => " |> ",
        _ => unreachable!("not a connective"),
    }
}

/// What is left of a game after the moves recorded in `pos`.
pub fn residual(g: &GameTree, pos: &Pos) -> GameTree {
    match (g, pos) {
        (GameTree::Cho(_, c), Pos::Cho(Some((i, sub)))) => residual(&c[i - 1], sub),
        (GameTree::Par(k, c), Pos::Par(subs)) => {
            GameTree::Par(*k, c.iter().zip(subs).map(|(t, p)| residual(t, p)).collect())
        }
        (GameTree::Seq(k, c), Pos::Seq(deg, subs)) => {
            let current = deg[slot(k.owner())];
            let head = residual(&c[current], &subs[current]);
            if current + 1 == c.len() {
                head
            } else {
                let mut rest = vec![head];
                rest.extend(c[current + 1..].iter().cloned());
                GameTree::Seq(*k, rest)
            }
        }
        _ => g.clone(),
    }
}

/// Renders `f` at the position `pos` of its game `g`. Resolved choices show
/// only the chosen component, sequential combinations bracket the component
/// currently in play, and a general atom that has been played into is
/// followed by the rest of its game in braces.
pub fn position_view(f: &Formula, g: &GameTree, pos: &Pos) -> String {
    match (f, pos) {
        (Formula::Lit(l), _) if !matches!(l.atom, Atom::Elementary(_)) && *pos != Pos::initial(g) => {
            // a negated atom denotes the negated game; show the atom's own
            let rest = residual(g, pos);
            let rest = if l.negated { rest.negate() } else { rest };
            format!("{l}{{{rest}}}")
        }
        (Formula::Choice(_, c), Pos::Cho(Some((i, sub)))) => position_view(&c[i - 1], &g.children()[i - 1], sub),
        (Formula::Par(_, c), Pos::Par(subs)) => {
            let parts: Vec<String> =
                c.iter().zip(g.children()).zip(subs).map(|((f, t), p)| position_view(f, t, p)).collect();
            format!("({})", parts.join(symbol(f)))
        }
        (Formula::Seq(k, c, _), Pos::Seq(deg, subs)) => {
            let current = deg[slot(k.owner())];
            let parts: Vec<String> = c
                .iter()
                .zip(g.children())
                .zip(subs)
                .enumerate()
                .map(|(i, ((f, t), p))| {
                    let v = position_view(f, t, p);
                    if i == current && current > 0 {
                        format!("[{v}]")
                    } else {
                        v
                    }
                })
                .collect();
            format!("({})", parts.join(symbol(f)))
        }
        _ => f.to_string(),
    }
}
