/** Browser bootstrap: wire the controller to the document. */

import { ApiClient } from './api';
import { WorkspaceController } from './app';
import { mountPromptPanel, promptPanelModel } from './promptPanel';
import { syncedScrollTop } from './scrollSync';
import { editedToSourceLookup } from './timelineLayout';
import { mountTimeline, timelineRows } from './timelineView';
import {
  measureColumn,
  mountTranscriptColumn,
  transcriptColumnModel,
} from './transcriptView';

function query(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

/** The frame-strip scrubber stand-in: show where a click would seek to. */
function showSeekTarget(root: HTMLElement, variationId: string, tSourceMs: number) {
  let banner = root.querySelector<HTMLElement>('.seek-banner');
  if (!banner) {
    banner = document.createElement('div');
    banner.className = 'seek-banner';
    root.prepend(banner);
  }
  banner.textContent = `${variationId}: source ${(tSourceMs / 1000).toFixed(1)}s`;
}

async function start() {
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app mount point');
  const api = new ApiClient(query('api', ''));
  const controller = new WorkspaceController(api, query('project', 'demo'), render);
  await controller.load();

  function render() {
    const project = controller.project;
    const data = controller.stageData[controller.state.activeStage];
    if (!project || !data || !root) return;
    root.textContent = '';

    const toolbar = document.createElement('div');
    toolbar.className = 'toolbar';
    for (const [label, handler] of [
      ['timeline', () => controller.setViewMode('timeline')],
      ['transcript', () => controller.setViewMode('transcript')],
      [
        controller.state.clockMode === 'edited' ? 'show source' : 'show edited',
        () => controller.toggleClockMode(),
      ],
    ] as const) {
      const button = document.createElement('button');
      button.textContent = label;
      button.onclick = handler;
      toolbar.appendChild(button);
    }
    root.appendChild(toolbar);

    const ordered = data.order
      .map((id) => data.variations.find((v) => v.id === id))
      .filter((v): v is NonNullable<typeof v> => Boolean(v));

    if (controller.state.viewMode === 'timeline') {
      const viewportPx = root.clientWidth || 960;
      const rows = timelineRows({
        project,
        coverage: data.coverage,
        variations: ordered,
        placementsOf: (v) => v.payload.placements ?? [],
        clockMode: controller.state.clockMode,
        viewportPx,
      });
      root.appendChild(
        mountTimeline(rows, {
          onSeek: async (vid, x) => {
            const mapping = await controller.mapping(vid);
            let tSource: number | null;
            if (controller.state.clockMode === 'source') {
              tSource = Math.round((x / viewportPx) * project.source_duration_ms);
            } else {
              const tEdited = Math.round(
                (x / viewportPx) * mapping.edited_duration_ms,
              );
              tSource = editedToSourceLookup(mapping, tEdited);
            }
            if (tSource !== null) showSeekTarget(root!, vid, tSource);
          },
        }),
      );
    } else {
      const container = document.createElement('div');
      container.className = 'transcript-grid';
      const columns: HTMLElement[] = [];
      for (const v of ordered) {
        const model = transcriptColumnModel(
          project,
          data.inclusion.cells[v.id] ?? [],
          controller.state.clockMode,
          v.payload.placements ?? [],
        );
        const column = mountTranscriptColumn(model, v.id, {
          onScrollSync: (scrollTop) => {
            const sourceGeometry = measureColumn(column);
            for (const other of columns) {
              if (other === column) continue;
              other.scrollTop = syncedScrollTop(
                sourceGeometry,
                measureColumn(other),
                scrollTop,
              );
            }
          },
        });
        columns.push(column);
        container.appendChild(column);
      }
      root.appendChild(container);
    }

    const panelModel = promptPanelModel(
      controller.state.selectedIds.length >= 2 ? 'recombine' : 'refine',
      controller.state.selectedIds,
      '',
    );
    root.appendChild(
      mountPromptPanel(panelModel, {
        onSubmit: (action, prompt) => {
          if (action === 'refine') {
            void controller.refine(controller.state.selectedIds[0], prompt);
          } else if (action === 'recombine') {
            void controller.recombine(controller.state.selectedIds, prompt);
          } else {
            void controller.surprise();
          }
        },
      }),
    );
  }
}

start().catch((error) => {
  console.error(error);
  const banner = document.createElement('div');
  banner.className = 'error-banner';
  banner.textContent = String(error);
  document.body.appendChild(banner);
});
