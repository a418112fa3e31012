// DOM wiring for the derivation trainer. The page shows one exercise at a
// time: click a subformula, pick a law from the live menu, watch the
// rewrite; undo pops exactly one step. Reaching the goal shows the
// completion banner and offers submission.

import { Api, ExerciseSummary } from "./api.js";
import { buildFormulaElement, parseFullRendering, pathKey } from "./formulaView.js";
import { TrainerState } from "./state.js";

export type AppHandles = {
  state: TrainerState;
  refresh: () => void;
};

export function defaultBaseUrl(): string {
  const fromGlobal = (globalThis as Record<string, unknown>)["DISCRETA_BASE_URL"];
  if (typeof fromGlobal === "string" && fromGlobal) return fromGlobal;
  return "http://127.0.0.1:8750";
}

export async function initApp(root: HTMLElement, baseUrl: string = defaultBaseUrl()): Promise<AppHandles> {
  const doc = root.ownerDocument;
  const api = new Api(baseUrl);
  const storage = safeStorage(doc);
  const state = new TrainerState(api, storage);

  root.innerHTML = `
    <header>
      <h1>Entrenador de derivaciones</h1>
      <label>Ejercicio:
        <select id="exercise-select"></select>
      </label>
    </header>
    <section id="status" class="status" hidden></section>
    <section>
      <div id="formula" class="formula" aria-label="formula"></div>
      <div id="goal-banner" class="goal" hidden></div>
    </section>
    <section>
      <h2>Leyes aplicables</h2>
      <div id="moves" class="moves"></div>
    </section>
    <section>
      <h2>Historial</h2>
      <ol id="history"></ol>
      <button id="undo" type="button">Deshacer</button>
      <button id="submit" type="button" hidden>Enviar derivación</button>
      <div id="submit-result" hidden></div>
    </section>
  `;

  const selectEl = root.querySelector<HTMLSelectElement>("#exercise-select")!;
  const statusEl = root.querySelector<HTMLElement>("#status")!;
  const formulaEl = root.querySelector<HTMLElement>("#formula")!;
  const goalEl = root.querySelector<HTMLElement>("#goal-banner")!;
  const movesEl = root.querySelector<HTMLElement>("#moves")!;
  const historyEl = root.querySelector<HTMLElement>("#history")!;
  const undoEl = root.querySelector<HTMLButtonElement>("#undo")!;
  const submitEl = root.querySelector<HTMLButtonElement>("#submit")!;
  const submitResultEl = root.querySelector<HTMLElement>("#submit-result")!;

  const refresh = (): void => {
    statusEl.hidden = !state.error;
    statusEl.textContent = state.error ?? "";

    formulaEl.textContent = "";
    if (state.currentFull) {
      const tree = parseFullRendering(state.currentFull);
      formulaEl.append(buildFormulaElement(doc, tree));
      if (state.selectedPath !== null) {
        const key = pathKey(state.selectedPath);
        for (const span of formulaEl.querySelectorAll<HTMLElement>("[data-path]")) {
          span.classList.toggle("selected", span.dataset.path === key);
        }
      }
    }

    goalEl.hidden = !state.goalReached;
    goalEl.textContent = state.goalReached
      ? `∴ objetivo alcanzado: ${state.currentMinimal} — derivación completa`
      : "";
    submitEl.hidden = !state.goalReached;

    movesEl.textContent = "";
    if (state.busy) {
      movesEl.textContent = "…";
    } else if (state.selectedPath !== null && state.moves.length === 0) {
      movesEl.textContent = "no hay reducciones aquí";
    } else {
      for (const move of state.moves) {
        const button = doc.createElement("button");
        button.type = "button";
        button.className = "move";
        button.dataset.law = move.law;
        button.dataset.direction = move.direction;
        button.textContent = `${move.law} (${move.direction}): ${move.preview}`;
        button.disabled = state.busy;
        button.addEventListener("click", () => {
          void state.applyMove(move.law, move.direction);
        });
        movesEl.append(button);
      }
    }

    historyEl.textContent = "";
    for (const entry of state.history) {
      const item = doc.createElement("li");
      item.textContent = `≡ ${entry.afterMinimal}    [${entry.step.law} ${entry.step.direction} @ ${
        entry.step.path.join(",") || "raíz"
      }]`;
      historyEl.append(item);
    }

    submitResultEl.hidden = !state.submitResult;
    submitResultEl.textContent = state.submitResult ?? "";
  };

  state.subscribe(refresh);

  formulaEl.addEventListener("click", (event) => {
    const target = (event.target as HTMLElement | null)?.closest<HTMLElement>("[data-path]");
    if (!target || state.busy) return;
    const key = target.dataset.path ?? "";
    const path = key === "" ? [] : key.split(".").map((x) => Number(x));
    void state.selectNode(path);
  });

  undoEl.addEventListener("click", () => state.undo());
  submitEl.addEventListener("click", () => void state.submit());

  const listing = await api.exercises();
  const trainable = listing.exercises.filter((e) => e.kind === "derivation-goal");
  for (const exercise of trainable) {
    const option = doc.createElement("option");
    option.value = exercise.id;
    option.textContent = `${exercise.id} — ${exercise.title || exercise.statement}`;
    selectEl.append(option);
  }
  selectEl.addEventListener("change", () => {
    const chosen = trainable.find((e) => e.id === selectEl.value);
    if (chosen) void state.loadExercise(chosen);
  });

  if (trainable.length > 0) {
    await state.loadExercise(trainable[0] as ExerciseSummary);
  }
  refresh();
  return { state, refresh };
}

function safeStorage(doc: Document): Storage | null {
  try {
    return doc.defaultView?.localStorage ?? null;
  } catch {
    return null;
  }
}
